#include "eulerprof/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "eulerprof/analysis.hpp"
#include "eulerprof/core.hpp"
#include "eulerprof/cubical.hpp"
#include "eulerprof/io.hpp"
#include "eulerprof/vectorize.hpp"
#include "eulerprof/vr.hpp"

namespace eulerprof::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

int default_workers() {
  const char* env = std::getenv("EULERPROF_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  int value = 0;
  const char* end = env + std::char_traits<char>::length(env);
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc() || ptr != end || value < 1) {
    throw Error(ErrorKind::kParameter,
                std::string("EULERPROF_WORKERS must be a positive integer, got '") + env + "'");
  }
  return value;
}

void use_workers(int workers) {
  if (workers < 1) throw Error(ErrorKind::kParameter, "--workers must be at least 1");
#ifdef _OPENMP
  omp_set_num_threads(workers);
#endif
}

// Pulls `--config <file>` / `--config=<file>` out of args.
std::optional<std::string> take_config(std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file name");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  return path;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// key=value lines become `--key value` unless the flag is already present.
// Keys the chosen subcommand does not know are ignored, so one file can serve
// several subcommands.
void apply_config(const std::string& path, const CLI::App& sub, std::vector<std::string>& args) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kFormat, "cannot open config " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kFormat,
                  path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));
    const std::string flag = "--" + key;
    if (sub.get_option_no_throw(flag) == nullptr) continue;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (!given) {
      args.push_back(flag);
      args.push_back(value);
    }
  }
}

void emit(const std::string& content, const std::string& output, std::ostream& out) {
  if (output.empty() || output == "-") {
    out << content;
  } else {
    io::write_text_file(output, content);
  }
}

Canonical load_canonical(const std::string& path) {
  return canonicalize(io::read_contributions_file(path));
}

EulerCharacteristicProfile as_profile(const Canonical& c) {
  if (const auto* curve = std::get_if<EulerCharacteristicCurve>(&c)) return to_profile(*curve);
  return std::get<EulerCharacteristicProfile>(c);
}

std::size_t dim_of(const Canonical& c) {
  if (std::holds_alternative<EulerCharacteristicCurve>(c)) return 1;
  return std::get<EulerCharacteristicProfile>(c).dim();
}

std::string canonical_csv(const ContributionList& raw) {
  std::ostringstream s;
  std::visit([&](const auto& c) { io::write_contributions(s, c); }, canonicalize(raw));
  return s.str();
}

double pair_distance(const Canonical& a, const Canonical& b, std::optional<double> upper,
                     const std::vector<double>& trunc) {
  if (dim_of(a) != dim_of(b)) {
    throw Error(ErrorKind::kDimensionMismatch, "inputs have dimensions " +
                                                   std::to_string(dim_of(a)) + " and " +
                                                   std::to_string(dim_of(b)));
  }
  if (!trunc.empty()) return distance_ecp(as_profile(a), as_profile(b), FiltrationVector(trunc));
  if (dim_of(a) != 1) {
    throw Error(ErrorKind::kParameter, "profiles need --trunc t1,...,tn");
  }
  return distance_ecc(std::get<EulerCharacteristicCurve>(a), std::get<EulerCharacteristicCurve>(b),
                      upper);
}

template <typename T>
std::string join_values(const std::vector<T>& values) {
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    if constexpr (std::is_floating_point_v<T>) {
      line += io::format_real(values[i]);
    } else {
      line += std::to_string(values[i]);
    }
  }
  return line + '\n';
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Euler characteristic curves and profiles", "eulerprof"};
  app.require_subcommand(1);
  app.footer("Any subcommand accepts --config FILE with key=value lines; command-line flags win.");

  int workers = 1;
  std::string input;
  std::string output;

  // vr
  auto* vr_cmd = app.add_subcommand("vr", "Vietoris-Rips contributions of a point cloud (CSV)");
  double tmax = 0;
  std::string reorder = "ascending";
  std::optional<std::size_t> codensity_k;
  vr_cmd->add_option("--input", input, "point cloud CSV, one point per row")->required();
  vr_cmd->add_option("--tmax", tmax, "maximum edge length (closed)")->required();
  vr_cmd->add_option("--workers", workers, "worker threads");
  vr_cmd->add_option("--reorder", reorder, "vertex ordering heuristic")
      ->check(CLI::IsMember({"ascending", "none"}));
  vr_cmd->add_option("--codensity", codensity_k,
                     "add a second axis: mean distance to the K nearest neighbours");
  vr_cmd->add_option("--output", output, "contributions CSV (stdout if omitted)");

  // cubical
  auto* cub_cmd = app.add_subcommand("cubical", "Cubical contributions of an image");
  std::string format = "auto";
  cub_cmd->add_option("--input", input, "binary image, ASCII PGM or CSV matrix")->required();
  cub_cmd->add_option("--format", format, "input format")
      ->check(CLI::IsMember({"auto", "binary", "pgm", "csv"}));
  cub_cmd->add_option("--workers", workers, "worker threads");
  cub_cmd->add_option("--output", output, "contributions CSV (stdout if omitted)");

  // distance
  auto* dist_cmd = app.add_subcommand("distance", "L1 distance between two curves or profiles");
  std::string path_a;
  std::string path_b;
  std::optional<double> upper;
  std::vector<double> trunc;
  dist_cmd->add_option("--a", path_a, "first contributions CSV")->required();
  dist_cmd->add_option("--b", path_b, "second contributions CSV")->required();
  auto* dist_upper = dist_cmd->add_option("--upper", upper, "integrate curves up to T");
  dist_cmd->add_option("--trunc", trunc, "truncation bound t1,...,tn")
      ->delimiter(',')
      ->excludes(dist_upper);
  dist_cmd->add_option("--workers", workers, "worker threads");

  // distmatrix
  auto* mat_cmd = app.add_subcommand("distmatrix", "Pairwise distances of every *.csv in a folder");
  std::string dir;
  mat_cmd->add_option("--dir", dir, "folder of contributions CSV files")->required();
  auto* mat_upper = mat_cmd->add_option("--upper", upper, "integrate curves up to T");
  mat_cmd->add_option("--trunc", trunc, "truncation bound t1,...,tn")
      ->delimiter(',')
      ->excludes(mat_upper);
  mat_cmd->add_option("--workers", workers, "worker threads");
  mat_cmd->add_option("--output", output, "matrix CSV (stdout if omitted)");

  // vectorize
  auto* vec_cmd = app.add_subcommand("vectorize", "Sample a curve or profile on a regular grid");
  std::vector<std::size_t> samples;
  std::vector<double> fmax;
  vec_cmd->add_option("--input", input, "contributions CSV")->required();
  vec_cmd->add_option("--samples", samples, "samples per axis N[,N2,...]")->delimiter(',')->required();
  vec_cmd->add_option("--fmax", fmax, "upper sample per axis F[,F2,...]")->delimiter(',')->required();
  vec_cmd->add_option("--workers", workers, "worker threads");
  vec_cmd->add_option("--output", output, "one CSV row, row-major over axes (stdout if omitted)");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Euler characteristic at a point");
  std::vector<double> at;
  eval_cmd->add_option("--input", input, "contributions CSV")->required();
  eval_cmd->add_option("--at", at, "t, or p1,...,pn for a profile")->delimiter(',')->required();

  // plotdata
  auto* plot_cmd = app.add_subcommand("plotdata", "(t, EC) breakpoints of a curve");
  plot_cmd->add_option("--input", input, "contributions CSV")->required();
  plot_cmd->add_option("--output", output, "CSV with header t,ec (stdout if omitted)");

  try {
    workers = default_workers();
    std::vector<std::string> args = argv;
    const auto config = take_config(args);
    if (config) {
      const auto name = std::find_if(args.begin(), args.end(),
                                     [](const std::string& a) { return !a.empty() && a[0] != '-'; });
      if (name != args.end()) {
        if (const auto* sub = app.get_subcommand_no_throw(*name)) apply_config(*config, *sub, args);
      }
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);

    if (vr_cmd->parsed()) {
      use_workers(workers);
      auto cloud = io::read_point_cloud_file(input);
      if (reorder == "ascending" && !cloud.empty()) cloud = vr::reorder_by_degree(cloud, tmax);
      vr::VertexFiltrationSpec spec;
      if (codensity_k) {
        vr::FiltrationAxis axis;
        axis.vertex_values = vr::codensity(cloud, *codensity_k, workers);
        spec.extra_axes.push_back(std::move(axis));
      }
      const auto raw = vr::compute_contributions_vr(cloud, tmax, codensity_k ? &spec : nullptr, workers);
      emit(canonical_csv(raw), output, out);
    } else if (cub_cmd->parsed()) {
      use_workers(workers);
      const auto fmt = format == "auto"     ? io::guess_image_format(input)
                       : format == "binary" ? io::ImageFormat::kBinary
                       : format == "pgm"    ? io::ImageFormat::kPgm
                                            : io::ImageFormat::kCsv;
      ContributionList raw;
      if (fmt == io::ImageFormat::kBinary) {
        std::ifstream in(input, std::ios::binary);
        if (!in) throw Error(ErrorKind::kFormat, "cannot open " + input);
        io::BinaryImageStream stream(in);
        raw = cubical::compute_contributions_cubical(stream);
      } else {
        raw = cubical::compute_contributions_cubical(io::read_image_file(input, fmt));
      }
      emit(canonical_csv(raw), output, out);
    } else if (dist_cmd->parsed()) {
      use_workers(workers);
      const double d = pair_distance(load_canonical(path_a), load_canonical(path_b), upper, trunc);
      out << io::format_real(d) << '\n';
    } else if (mat_cmd->parsed()) {
      use_workers(workers);
      if (!fs::is_directory(dir)) throw Error(ErrorKind::kFormat, dir + " is not a directory");
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      std::vector<Canonical> items;
      for (const auto& f : files) items.push_back(load_canonical(f.string()));
      const std::size_t n = items.size();
      std::vector<double> matrix(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          matrix[i * n + j] = matrix[j * n + i] = pair_distance(items[i], items[j], upper, trunc);
        }
      }
      std::ostringstream s;
      s << "file";
      for (const auto& f : files) s << ',' << f.filename().string();
      s << '\n';
      for (std::size_t i = 0; i < n; ++i) {
        s << files[i].filename().string();
        for (std::size_t j = 0; j < n; ++j) s << ',' << io::format_real(matrix[i * n + j]);
        s << '\n';
      }
      emit(s.str(), output, out);
    } else if (vec_cmd->parsed()) {
      use_workers(workers);
      const auto c = load_canonical(input);
      if (const auto* curve = std::get_if<EulerCharacteristicCurve>(&c)) {
        if (samples.size() != 1 || fmax.size() != 1) {
          throw Error(ErrorKind::kDimensionMismatch, "a curve takes one --samples and one --fmax value");
        }
        emit(join_values(vectorize_ecc(*curve, samples[0], fmax[0])), output, out);
      } else {
        const auto tensor =
            vectorize_ecp(std::get<EulerCharacteristicProfile>(c), samples, FiltrationVector(fmax));
        emit(join_values(tensor.values), output, out);
      }
    } else if (eval_cmd->parsed()) {
      const auto c = load_canonical(input);
      if (at.size() != dim_of(c)) {
        throw Error(ErrorKind::kDimensionMismatch, "--at has " + std::to_string(at.size()) +
                                                       " coordinates, input has dimension " +
                                                       std::to_string(dim_of(c)));
      }
      std::int64_t value = 0;
      if (const auto* curve = std::get_if<EulerCharacteristicCurve>(&c)) {
        value = euler_characteristic_at(*curve, at[0]);
      } else {
        value = euler_characteristic_at(std::get<EulerCharacteristicProfile>(c), at);
      }
      out << value << '\n';
    } else if (plot_cmd->parsed()) {
      const auto c = load_canonical(input);
      const auto* curve = std::get_if<EulerCharacteristicCurve>(&c);
      if (curve == nullptr) {
        throw Error(ErrorKind::kDimensionMismatch, "plotdata needs a one-parameter curve");
      }
      std::ostringstream s;
      s << "t,ec\n";
      for (std::size_t i = 0; i < curve->size(); ++i) {
        s << io::format_real(curve->filtrations()[i]) << ',' << curve->prefix()[i] << '\n';
      }
      emit(s.str(), output, out);
    }
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "eulerprof: error[usage]: " << one_line(e.what()) << '\n';
    return 2;
  } catch (const UsageError& e) {
    err << "eulerprof: error[usage]: " << one_line(e.what()) << '\n';
    return 2;
  } catch (const Error& e) {
    err << "eulerprof: error[" << to_string(e.kind()) << "]: " << one_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "eulerprof: error[internal]: " << one_line(e.what()) << '\n';
    return 1;
  }
}

}  // namespace eulerprof::cli
