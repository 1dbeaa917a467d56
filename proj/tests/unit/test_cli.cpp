#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run qsd(const std::string& args) {
    const std::string cmd = std::string(QSD_BINARY) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    while (std::fgets(buf, sizeof buf, p)) r.out += buf;
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string model(const char* name) { return std::string(QSD_SOURCE_DIR) + "/models/" + name; }

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("levyqsd_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::vector<std::vector<double>> read_csv(const fs::path& file, std::vector<std::string>* header = nullptr) {
    std::ifstream in(file);
    std::string line;
    std::getline(in, line);
    if (header) {
        std::stringstream hs(line);
        std::string col;
        while (std::getline(hs, col, ',')) header->push_back(col);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("critical") {
    Run r = qsd("critical --model " + model("brownian.json"));
    CHECK(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["theta_star"].get<double>() == -1.0);
    CHECK(j["zeta_star"].get<double>() == -0.5);
    CHECK(j["certified"].get<bool>());

    r = qsd("critical --model " + model("me2.json"));
    CHECK(r.status == 0);
    CHECK(json::parse(r.out)["zeta_star"].get<double>() == doctest::Approx(-0.068888).epsilon(1e-5));

    r = qsd("critical --model " + model("unstable.json"));
    CHECK(r.status == 2);
    CHECK_FALSE(json::parse(r.out)["assumptions"]["stable"].get<bool>());
}

TEST_CASE("coeffs") {
    Run r = qsd("coeffs --model " + model("brownian.json"));
    CHECK(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["C"][1].get<double>() == doctest::Approx(-4.0 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(j["xi_tilde"].get<double>() == 0.0);
    CHECK(j["A_or_B"][0].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    r = qsd("coeffs --model " + model("brownian.json") + " --alpha 1 --beta 1");
    CHECK(json::parse(r.out)["mu_tilde"].get<double>() == doctest::Approx(0.0625).epsilon(1e-14));

    r = qsd("coeffs --model " + model("me2.json") + " --alpha 0 --beta 0");
    CHECK(json::parse(r.out)["mu_tilde"].get<double>() == doctest::Approx(1.0).epsilon(1e-13));

    CHECK(qsd("coeffs --model " + model("unstable.json")).status == 2);
}

TEST_CASE("exit codes for input problems") {
    CHECK(qsd("critical --model /nonexistent.json").status == 4);
    CHECK(qsd("critical").status == 4);
    CHECK(qsd("invert --model " + model("brownian.json")).status == 4);
    CHECK(qsd("invert --model " + model("brownian.json") + " --times 1:2").status == 4);
    CHECK(qsd("frobnicate").status == 4);
    CHECK(qsd("coeffs --model " + model("brownian.json") + " --alpha -1").status == 3);
}

TEST_CASE("rate-study output and bit-for-bit rerun from the sidecar") {
    const fs::path out = scratch("rate");
    const std::string study = std::string(QSD_SOURCE_DIR) + "/studies/brownian_rate.json";
    Run r = qsd("rate-study --study " + study + " --out " + out.string());
    REQUIRE(r.status == 0);
    std::vector<std::string> header;
    const auto rows = read_csv(out / "rate_study.csv", &header);
    CHECK(header == std::vector<std::string>{"t", "raw", "survival", "conditional", "tauberian", "profile",
                                             "predicted_limit"});
    REQUIRE(rows.size() == 3);
    const double limit = rows[0][6];
    CHECK(limit == doctest::Approx(0.28125).epsilon(1e-13));
    CHECK(std::abs(rows[2][5] - limit) < std::abs(rows[1][5] - limit));
    CHECK(std::abs(rows[1][5] - limit) < std::abs(rows[0][5] - limit));

    const json side = json::parse(slurp(out / "rate-study.json"));
    CHECK(side["command"] == "rate-study");
    CHECK(side["study"]["times"].size() == 3);

    const fs::path again = scratch("rate_again");
    r = qsd("rate-study --study " + (out / "rate-study.json").string() + " --out " + again.string());
    REQUIRE(r.status == 0);
    CHECK(slurp(out / "rate_study.csv") == slurp(again / "rate_study.csv"));
}

TEST_CASE("rate-study at the origin has an all-zero profile") {
    const fs::path out = scratch("rate0");
    REQUIRE(qsd("rate-study --model " + model("me2.json") + " --times 5:40:4 --out " + out.string()).status == 0);
    for (const auto& row : read_csv(out / "rate_study.csv")) CHECK(std::abs(row[5]) < 1e-12);
}

TEST_CASE("rate-study with a simulation overlay") {
    const fs::path out = scratch("ratesim");
    const fs::path study = out.string() + ".json";
    std::ofstream(study) << json{{"model_file", model("brownian.json")},
                                 {"points", {{1.0, 1.0}}},
                                 {"times", {5.0, 10.0}},
                                 {"simulate", true},
                                 {"simulation", {{"replications", 50000}, {"seed", 5}}}}
                                .dump();
    REQUIRE(qsd("rate-study --study " + study.string() + " --out " + out.string()).status == 0);
    std::vector<std::string> header;
    const auto rows = read_csv(out / "rate_study.csv", &header);
    CHECK(header.size() == 14);
    CHECK(header[9] == "sim_conditional");
    for (const auto& row : rows) CHECK(std::abs(row[9] - row[3]) < 4.0 * row[10]);
    fs::remove(study);
}

TEST_CASE("density") {
    const fs::path out = scratch("density");
    const std::string study = std::string(QSD_SOURCE_DIR) + "/studies/brownian_density.json";
    REQUIRE(qsd("density --study " + study + " --out " + out.string()).status == 0);
    std::vector<std::string> header;
    const auto rows = read_csv(out / "density.csv", &header);
    CHECK(header == std::vector<std::string>{"x", "y", "density"});
    CHECK(rows.size() == 400);
    for (const auto& r : rows) {
        CHECK(r[2] == doctest::Approx(r[0] * std::exp(-r[0]) * r[1] * std::exp(-r[1])).epsilon(1e-4));
    }
    REQUIRE(qsd("density --study " + study + " --which xi --out " + out.string()).status == 0);
    for (const auto& r : read_csv(out / "density.csv")) {
        const double x = r[0];
        const double y = r[1];
        auto f = [](int k, double z) { return std::pow(z, k - 1) * std::exp(-z) / std::tgamma(k); };
        const double ref = 2.0 * f(4, x) * f(2, y) + 2.0 * f(2, x) * f(4, y) - 4.0 * f(2, x) * f(2, y);
        CHECK(std::abs(r[2] - ref) < 1e-3);
    }
}

TEST_CASE("simulate and thread-independence") {
    const fs::path a = scratch("sim1");
    const fs::path b = scratch("sim3");
    const std::string base = "simulate --model " + model("me2.json") + " --times 2:8:3 --replications 20000 --seed 3";
    REQUIRE(qsd(base + " --threads 1 --out " + a.string()).status == 0);
    REQUIRE(qsd(base + " --threads 3 --out " + b.string()).status == 0);
    CHECK(slurp(a / "simulate.csv") == slurp(b / "simulate.csv"));
    std::vector<std::string> header;
    const auto rows = read_csv(a / "simulate.csv", &header);
    CHECK(header == std::vector<std::string>{"t", "estimate", "std_error", "n_effective", "analytic", "profile"});
    for (const auto& r : rows) CHECK(std::abs(r[1] - r[4]) < 4.0 * r[2]);
}

TEST_CASE("transform") {
    const fs::path out = scratch("transform");
    REQUIRE(qsd("transform --model " + model("me2.json") + " --alpha 1 --beta 1 --offsets 1e-2 1e-3 1e-4 --out " +
                out.string())
                .status == 0);
    const auto rows = read_csv(out / "transform.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[2][4] < rows[1][4]);
    CHECK(rows[1][4] < rows[0][4]);
}
