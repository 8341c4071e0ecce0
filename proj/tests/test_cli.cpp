// Reader units plus end-to-end runs of the bcnorm executable.
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "bcnorm/bcnorm.hpp"
#include "input.hpp"
#include "qq_plot.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace bcnorm;
using namespace bcnorm::cli;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// stdout only; stderr goes to a file next to the outputs
Run run(const std::string& args) {
  const std::string cmd = std::string(BCNORM_CLI) + " " + args + " 2>" +
                          (fs::temp_directory_path() / "bcnorm_cli_stderr.txt").string();
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string last_stderr() {
  std::ifstream in(fs::temp_directory_path() / "bcnorm_cli_stderr.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "bcnorm_cli_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path lognormal_file(std::size_t n) {
  const Sample x = testing::lognormal_sample(77, n);
  std::string text = "value\n";
  for (double v : x) text += format_number(v) + "\n";
  return write_file("ln" + std::to_string(n) + ".csv", text);
}

}  // namespace

TEST_CASE("read_column: header, comments, blanks") {
  std::istringstream in("# measured\nheight\n\n1.5\n 2 # second\n\"3e0\"\n");
  const Column c = read_column(in);
  CHECK(c.header == "height");
  REQUIRE(c.values.size() == 3);
  CHECK(c.values[2] == 3.0);
  CHECK(c.rows == std::vector<std::size_t>{4, 5, 6});
}

TEST_CASE("read_column: headerless and multi-column") {
  std::istringstream plain("1\n2\n+3\n");
  CHECK(read_column(plain).values == std::vector<double>{1, 2, 3});

  std::istringstream multi("id;x;w\n1;10.5;2\n2;11;3\n");
  CHECK(read_column(multi).values == std::vector<double>{10.5, 11});
  std::istringstream named("id,z\n1,0.5\n");
  CHECK(read_column(named, "z").values == std::vector<double>{0.5});
}

TEST_CASE("read_column: errors name the line") {
  auto row_of = [](const std::string& text, const std::string& column = "") -> std::size_t {
    std::istringstream in(text);
    try {
      read_column(in, column);
    } catch (const InputError& e) {
      return e.row();
    }
    return 0;
  };
  CHECK(row_of("x\n1\n\nfoo\n") == 4);
  CHECK(row_of("1,2\n") == 1);
  CHECK(row_of("a,b\n1,2\n") == 1);
  CHECK(row_of("a,x\n1,2\n3\n") == 3);
  CHECK(row_of("x\n1\ninf\n") == 3);
  CHECK(row_of("x\n1e400\n") == 2);
}

TEST_CASE("format_number round trips") {
  for (double v : {0.1, -2.5e-300, 1.0 / 3.0, 12345678.9}) {
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("make_qq") {
  const QQData qq = make_qq({2.0, -1.0, 0.0, 1.0, -2.0});
  CHECK(qq.z.front() == -2.0);
  CHECK(qq.position.front() < 0.0);
  CHECK(qq.position[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(qq.mean == doctest::Approx(0.0));
  CHECK(qq.sd == doctest::Approx(std::sqrt(2.5)));
  CHECK(qq.r > 0.95);
  CHECK_THROWS_AS(make_qq({1.0, 2.0}), SizeError);
  CHECK_THROWS_AS(make_qq({1.0, 1.0, 1.0}), DegenerateError);

  std::ostringstream svg;
  write_qq_svg(svg, qq, "t");
  CHECK(svg.str().find("<svg") != std::string::npos);
  CHECK(svg.str().find("QQ r") != std::string::npos);
}

TEST_CASE("cli: test command CSV matches the library") {
  const fs::path file = lognormal_file(60);
  const Run r = run("test " + file.string() + " --model 1p --csv");
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header, sw;
  std::getline(lines, header);
  std::getline(lines, sw);
  CHECK(header == "test,n,model,lambda,delta,loglik,statistic,p_raw,z,q,calibrated");

  const Sample x = testing::lognormal_sample(77, 60);
  const BoxCoxFit fit = fit_1p(x);
  const TestResult t = shapiro_wilk(boxcox_transform(x, fit.lambda, 0.0));
  const double q =
      calibrate_p(t.p_raw, 60, builtin_coefficients(NormalityTest::SW, BoxCoxModel::OneParam));
  const std::string expect = "SW,60,1p," + format_number(fit.lambda) + ",0," +
                             format_number(fit.loglik) + "," + format_number(t.statistic) + "," +
                             format_number(t.p_raw) + "," + format_number(t.z) + "," +
                             format_number(q) + ",true";
  CHECK(sw == expect);
}

TEST_CASE("cli: JSON and CSV carry the same numbers") {
  const fs::path file = lognormal_file(60);
  const Run j = run("test " + file.string() + " --model 2p --test ad --json");
  const Run c = run("test " + file.string() + " --model 2p --test ad --csv");
  REQUIRE(j.code == 0);
  REQUIRE(c.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  const auto& res = doc["results"][0];
  const std::string row = c.out.substr(c.out.find('\n') + 1);
  const std::string expect = "AD,60,2p," + format_number(doc["lambda"].get<double>()) + "," +
                             format_number(doc["delta"].get<double>()) + "," +
                             format_number(doc["loglik"].get<double>()) + "," +
                             format_number(res["statistic"].get<double>()) + "," +
                             format_number(res["p_raw"].get<double>()) + "," +
                             format_number(res["z"].get<double>()) + "," +
                             format_number(res["q"].get<double>()) + ",true\n";
  CHECK(row == expect);
}

TEST_CASE("cli: exit codes") {
  const fs::path small = write_file("small.csv", "x\n1\n2\n3\n");
  CHECK(run("test " + small.string()).code == 2);

  const fs::path neg = write_file("neg.csv", "x\n1\n2\n3\n4\n-5\n6\n7\n8\n9\n");
  CHECK(run("test " + neg.string() + " --model 1p").code == 3);
  CHECK(last_stderr().find("line 6") != std::string::npos);
  CHECK(run("test " + neg.string() + " --model 2p").code == 0);

  const fs::path bad = write_file("bad.csv", "x\n1\n2\nabc\n");
  CHECK(run("test " + bad.string()).code == 2);
  CHECK(last_stderr().find("line 4") != std::string::npos);

  const fs::path flat = write_file("flat.csv", "x\n2\n2\n2\n2\n2\n2\n2\n2\n2\n");
  CHECK(run("test " + flat.string()).code == 4);

  CHECK(run("test /nonexistent/file.csv").code == 2);
  CHECK(run("test " + small.string() + " --model 3p").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("cli: calibration refused outside the coefficient range") {
  const fs::path file = lognormal_file(20);
  const Run refused = run("test " + file.string() + " --csv");
  REQUIRE(refused.code == 0);
  CHECK(refused.out.find(",false\n") != std::string::npos);
  CHECK(last_stderr().find("--force") != std::string::npos);
  const Run forced = run("test " + file.string() + " --csv --force");
  CHECK(forced.out.find(",false\n") == std::string::npos);
}

TEST_CASE("cli: model none reports the raw P") {
  const fs::path file = lognormal_file(60);
  const Run r = run("test " + file.string() + " --model none --test sw --json");
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["results"][0]["q"] == doc["results"][0]["p_raw"]);
  CHECK(doc["note"].get<std::string>().find("raw P") != std::string::npos);
}

TEST_CASE("cli: simulate is reproducible and writes a manifest") {
  const fs::path a = scratch() / "simA";
  const fs::path b = scratch() / "simB";
  fs::remove_all(a);
  fs::remove_all(b);
  const std::string args = " --sizes 20,40 --reps 100 --seed 99 -q --scores --out ";
  REQUIRE(run("simulate --threads 1" + args + a.string()).code == 0);
  REQUIRE(run("simulate --threads 3" + args + b.string()).code == 0);
  CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
  CHECK(slurp(a / "scores" / "z_n40_sw_2p.csv") == slurp(b / "scores" / "z_n40_sw_2p.csv"));
  const auto m = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(m["command"] == "simulate");
  CHECK(m["seed"] == 99);
  CHECK(m["version"] == kVersion);
  CHECK(m["config"]["reps"] == 100);

  const Run stdout_run = run("simulate" + std::string(" --sizes 20,40 --reps 100 --seed 99 -q"));
  CHECK(stdout_run.out == slurp(a / "summary.csv"));
  CHECK(run("simulate --reps 5 -q").code == 2);
  CHECK(run("simulate --sizes 20,x -q").code == 2);
}

TEST_CASE("cli: calibrate rebuilds coefficients from a summary") {
  const fs::path out = scratch() / "coeffs.txt";
  const Run r = run("calibrate --summary " BCNORM_TEST_DATA "/reference_zscores.csv --out " +
                    out.string());
  REQUIRE(r.code == 0);
  const std::size_t sw1 = r.out.find("Regression fit SW 1p mean");
  const std::size_t ad2 = r.out.find("Regression fit AD 2p mean");
  const std::size_t sw1sd = r.out.find("Regression fit SW 1p sd");
  CHECK(sw1 < ad2);
  CHECK(ad2 < sw1sd);
  CHECK(sw1sd != std::string::npos);
  CHECK(fs::exists(out.string() + ".manifest.json"));

  const CoefficientSet set = CoefficientSet::load(out.string());
  CHECK(set.get(NormalityTest::SW, BoxCoxModel::OneParam).A == doctest::Approx(0.772).epsilon(1e-3));
  CHECK(set.get(NormalityTest::AD, BoxCoxModel::TwoParam).B ==
        doctest::Approx(0.0311).epsilon(2e-2));

  const fs::path file = lognormal_file(60);
  const Run with = run("test " + file.string() + " --coeffs " + out.string() + " --json");
  CHECK(with.code == 0);

  const fs::path broken = write_file("broken_summary.csv", "n,test,model,mean_z\n40,SW,1p,0.6\n");
  const Run bad = run("calibrate --summary " + broken.string());
  CHECK(bad.code == 2);
  CHECK(last_stderr().find("sd_z") != std::string::npos);
}

TEST_CASE("cli: validate and qq") {
  const Run v = run("validate --sizes 30 --reps 100 --models true,1p --tests sw --csv -q");
  REQUIRE(v.code == 0);
  CHECK(v.out.rfind("n,test,model,model_mean,model_sd,", 0) == 0);
  CHECK(v.out.find("30,SW,true,0,1,") != std::string::npos);

  const fs::path svg = scratch() / "plot.svg";
  const Run q = run("qq --from-sim n=30,test=sw,model=1p,reps=100 --svg " + svg.string());
  REQUIRE(q.code == 0);
  CHECK(slurp(svg).find("</svg>") != std::string::npos);
  CHECK(fs::exists(svg.string() + ".manifest.json"));

  const fs::path z = write_file("z.csv", "z\n0.1\n-0.4\n1.2\n0.3\n");
  const Run qc = run("qq --zscores " + z.string());
  CHECK(qc.code == 0);
  CHECK(qc.out.rfind("position,z\n", 0) == 0);
  CHECK(run("qq --from-sim n=30,tst=sw").code == 2);
  CHECK(run("qq").code == 2);
}
