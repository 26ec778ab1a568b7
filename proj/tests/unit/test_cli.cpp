#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eulerprof/cli.hpp"
#include "eulerprof/io.hpp"
#include "support.hpp"

namespace eulerprof::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("eulerprof_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("tri.csv", "x,y\n0,0\n1,0\n0.5,0.8660254037844387\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }
  std::string read(const std::string& name) const {
    std::ifstream in(path(name), std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

TEST_F(Cli, TriangleFixture) {
  auto r = call({"vr", "--input", path("tri.csv"), "--tmax", "1", "--output", path("c.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read("c.csv"), "f1,delta\n0,3\n1,-2\n");

  r = call({"evaluate", "--input", path("c.csv"), "--at", "0.5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "3\n");

  r = call({"distance", "--a", path("c.csv"), "--b", path("c.csv"), "--upper", "10"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0\n");

  r = call({"plotdata", "--input", path("c.csv")});
  EXPECT_EQ(r.out, "t,ec\n0,3\n1,1\n");

  r = call({"vectorize", "--input", path("c.csv"), "--samples", "2", "--fmax", "1"});
  EXPECT_EQ(r.out, "3,1\n");
}

TEST_F(Cli, WorkersNeverChangeBytes) {
  testing::Rng rng(3);
  const auto cloud = testing::random_cloud(rng, 80, 3);
  std::ostringstream csv;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    csv << io::format_real(cloud.point(i)[0]) << ',' << io::format_real(cloud.point(i)[1]) << ','
        << io::format_real(cloud.point(i)[2]) << '\n';
  }
  write("cloud.csv", csv.str());
  std::string reference;
  for (const char* w : {"1", "2", "8"}) {
    for (const char* reorder : {"ascending", "none"}) {
      const auto r = call({"vr", "--input", path("cloud.csv"), "--tmax", "0.3", "--workers", w, "--reorder", reorder,
                           "--codensity", "5"});
      ASSERT_EQ(r.code, 0) << r.err;
      if (reference.empty()) reference = r.out;
      EXPECT_EQ(r.out, reference);
    }
  }
  EXPECT_EQ(reference.substr(0, 12), "f1,f2,delta\n");
}

TEST_F(Cli, Cubical) {
  write("ring.pgm", "P2\n3 3\n1\n0 0 0\n0 1 0\n0 0 0\n");
  write("ring.csv", "0,0,0\n0,1,0\n0,0,0\n");
  const auto a = call({"cubical", "--input", path("ring.pgm")});
  const auto b = call({"cubical", "--input", path("ring.csv")});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, "f1,delta\n1,1\n");

  {
    std::ofstream bin(path("ring.bin"), std::ios::binary);
    io::write_binary_image(bin, cubical::Image({3, 3}, 1, {0, 0, 0, 0, 1, 0, 0, 0, 0}), io::ImageDtype::kUint8);
  }
  const auto c = call({"cubical", "--input", path("ring.bin"), "--output", path("ring_out.csv")});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(read("ring_out.csv"), a.out);
}

TEST_F(Cli, DistanceMatrixAndProfiles) {
  fs::create_directories(dir_ / "set");
  write("set/a.csv", "f1,f2,delta\n0,0,1\n");
  write("set/b.csv", "f1,f2,delta\n1,0,1\n");
  write("set/ignored.txt", "junk");
  const auto r = call({"distmatrix", "--dir", path("set"), "--trunc", "2,2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "file,a.csv,b.csv\na.csv,0,2\nb.csv,2,0\n");

  const auto d = call({"distance", "--a", path("set/a.csv"), "--b", path("set/b.csv")});
  EXPECT_EQ(d.code, 1);
  EXPECT_EQ(d.err, "eulerprof: error[parameter]: profiles need --trunc t1,...,tn\n");

  const auto e = call({"evaluate", "--input", path("set/a.csv"), "--at", "1"});
  EXPECT_EQ(e.code, 1);
  EXPECT_EQ(e.err.rfind("eulerprof: error[dimension-mismatch]: ", 0), 0u);
}

TEST_F(Cli, Errors) {
  auto r = call({"vr", "--input", path("tri.csv"), "--tmax", "1", "--bogus"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("eulerprof: error[usage]: ", 0), 0u);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);

  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"frobnicate"}).code, 2);

  write("bad.csv", "f1,delta\n0,1\n0\n");
  r = call({"evaluate", "--input", path("bad.csv"), "--at", "0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("eulerprof: error[format]: ", 0), 0u);

  write("one.csv", "f1,delta\n0,1\n");
  write("two.csv", "f1,delta\n0,2\n");
  r = call({"distance", "--a", path("one.csv"), "--b", path("two.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("eulerprof: error[divergent]: ", 0), 0u);

  r = call({"vr", "--input", path("tri.csv"), "--tmax", "1", "--workers", "0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("eulerprof: error[parameter]: ", 0), 0u);

  r = call({"distance", "--a", path("one.csv"), "--b", path("one.csv"), "--upper", "1", "--trunc", "1"});
  EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, ConfigFileAndOverride) {
  write("run.cfg", "# shared settings\ntmax = 0.5\nsamples=4\nreorder=none\n");
  auto r = call({"vr", "--config", path("run.cfg"), "--input", path("tri.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "f1,delta\n0,3\n");
  r = call({"vr", "--input", path("tri.csv"), "--tmax", "1", "--config=" + path("run.cfg")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "f1,delta\n0,3\n1,-2\n");
  write("broken.cfg", "tmax\n");
  EXPECT_EQ(call({"vr", "--config", path("broken.cfg"), "--input", path("tri.csv")}).code, 1);
}

TEST_F(Cli, WorkersFromEnvironment) {
  ::setenv("EULERPROF_WORKERS", "3", 1);
  EXPECT_EQ(call({"vr", "--input", path("tri.csv"), "--tmax", "1"}).code, 0);
  ::setenv("EULERPROF_WORKERS", "zero", 1);
  const auto r = call({"vr", "--input", path("tri.csv"), "--tmax", "1"});
  EXPECT_EQ(r.code, 1);
  ::unsetenv("EULERPROF_WORKERS");
}

TEST_F(Cli, Help) {
  const auto r = call({"vr", "--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--tmax"), std::string::npos);
}

}  // namespace
}  // namespace eulerprof::cli
