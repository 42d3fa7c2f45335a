#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <heisenspec/cli.hpp>
#include <heisenspec/io.hpp>

using namespace heisenspec;
using Catch::Approx;
using io::ordered_json;

namespace {

void put_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << body;
}

ordered_json parse_doc(const cli::cli_result& r) { return ordered_json::parse(r.doc); }

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

TEST_CASE("float17 output round-trips and is stable") {
    REQUIRE(io::float17(0.0625) == "0.0625");
    REQUIRE(io::float17(0.1) == "0.10000000000000001");
    const double v = 1.0 / 3.0;
    REQUIRE(std::stod(io::float17(v)) == v);
    ordered_json j;
    j["x"] = 0.1;
    REQUIRE(io::write_json(j) == "{\"x\":0.10000000000000001}\n");
}

TEST_CASE("nu subcommand emits the envelope") {
    const auto res = cli::run({"nu", "--n", "1", "--mu", "0"});
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.doc.rfind("{\"tool\":\"heisenspec\",\"version\":\"0.1.0\",\"params\":", 0) == 0);
    const auto j = parse_doc(res);
    REQUIRE(j["tool"] == "heisenspec");
    REQUIRE(j["params"]["n"] == 1);
    REQUIRE(j["result"]["value"].get<double>() == Approx(0.0625).epsilon(1e-10));
    REQUIRE(j["result"]["est_error"].get<double>() >= 0.0);

    const auto again = cli::run({"nu", "--n", "1", "--mu", "0"});
    REQUIRE(again.doc == res.doc);  // deterministic bytes
}

TEST_CASE("errors map to the flat error envelope") {
    const auto div = cli::run({"nu", "--n", "1", "--mu", "1"});
    REQUIRE(div.exit_code == 2);
    const auto jd = parse_doc(div);
    REQUIRE(jd["error"] == "DivergentIntegral");
    REQUIRE(jd.contains("detail"));
    REQUIRE_FALSE(jd.contains("result"));

    const auto missing = cli::run({"nu", "--n", "1"});
    REQUIRE(missing.exit_code == 2);
    REQUIRE(parse_doc(missing)["error"] == "ParseError");

    const auto junk = cli::run({"nu", "--n", "abc", "--mu", "0"});
    REQUIRE(junk.exit_code == 2);
    REQUIRE(parse_doc(junk)["error"] == "ParseError");

    const auto none = cli::run({});
    REQUIRE(none.exit_code == 2);
    REQUIRE(parse_doc(none)["error"] == "ParseError");
}

TEST_CASE("help text lists the subcommands") {
    const auto res = cli::run({"--help"});
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.doc.find("nilmanifold") != std::string::npos);
    REQUIRE(res.doc.find("weyl-table") != std::string::npos);
    REQUIRE(res.doc.find("heat-kernel") != std::string::npos);
}

TEST_CASE("heat-kernel subcommand") {
    const auto res = cli::run({"heat-kernel", "--n", "1", "--mu", "0", "--x0", "0",
                               "--r2", "0", "--t", "1"});
    REQUIRE(res.exit_code == 0);
    const auto j = parse_doc(res);
    REQUIRE(j["result"]["value"]["re"].get<double>() == Approx(0.125).epsilon(1e-8));
    REQUIRE(j["result"]["value"]["im"].get<double>() == 0.0);
}

TEST_CASE("gamma table CSV layout") {
    const auto res = cli::run({"weyl-table", "--coeff", "gamma", "--n", "1"});
    REQUIRE(res.exit_code == 0);
    const auto ln = lines_of(res.doc);
    REQUIRE(ln.size() == 4);
    REQUIRE(ln[0] == "n,k,value");
    const auto row0 = io::split_csv_line(ln[1]);
    REQUIRE(row0[0] == "1");
    REQUIRE(row0[1] == "0");
    REQUIRE(std::stod(row0[2]) == Approx(0.03125).epsilon(1e-10));
    REQUIRE(ln[2] == "1,1,skipped");
    const auto row2 = io::split_csv_line(ln[3]);
    REQUIRE(row2[1] == "2");
    REQUIRE(std::stod(row2[2]) == Approx(0.03125).epsilon(1e-10));
}

TEST_CASE("alpha table JSON format and volume convention") {
    const auto res = cli::run({"weyl-table", "--coeff", "alpha", "--n", "2", "--kappa",
                               "0", "--format", "json"});
    REQUIRE(res.exit_code == 0);
    const auto j = parse_doc(res);
    const auto& rows = j["result"]["rows"];
    REQUIRE(rows.size() == 9);
    double plain_value = 0;
    for (const auto& r : rows) {
        REQUIRE(r["coefficient"] == "alpha");
        const int q = r["q"].get<int>();
        if (q == 0 || q == 2) {
            REQUIRE(r["value"] == "skipped");
        } else {
            REQUIRE(r["value"].is_number());
            if (r["p"] == 0) plain_value = r["value"].get<double>();
        }
    }
    REQUIRE(plain_value == Approx(1.0 / (576.0 * M_PI)).epsilon(1e-10));

    const auto scaled = cli::run({"weyl-table", "--coeff", "alpha", "--n", "2", "--kappa",
                                  "0", "--format", "json", "--volume-convention", "section8"});
    const auto js = parse_doc(scaled);
    for (const auto& r : js["result"]["rows"])
        if (r["p"] == 0 && r["q"] == 1)
            REQUIRE(r["value"].get<double>() == Approx(plain_value * 0.25).epsilon(1e-12));
}

TEST_CASE("spectrum CSV round-trips") {
    const spectrum sp = make_spectrum({1.0, 2.5, 4.0}, {2, 1, 3});
    const std::string path = "tmp_spectrum_roundtrip.csv";
    put_file(path, io::spectrum_to_csv(sp));
    const spectrum back = io::spectrum_from_csv(path);
    REQUIRE(back.lambda == sp.lambda);
    REQUIRE(back.mult == sp.mult);
    std::remove(path.c_str());

    put_file(path, "wrong,header\n1,1\n");
    REQUIRE_THROWS_AS(io::spectrum_from_csv(path), parse_error);
    put_file(path, "eigenvalue,multiplicity\n1.0\n");
    REQUIRE_THROWS_AS(io::spectrum_from_csv(path), parse_error);
    put_file(path, "eigenvalue,multiplicity\nx,1\n");
    REQUIRE_THROWS_AS(io::spectrum_from_csv(path), parse_error);
    std::remove(path.c_str());
    REQUIRE_THROWS_AS(io::spectrum_from_csv("no_such_file.csv"), io_error);
}

TEST_CASE("trace CSV feeds the karamata subcommand") {
    const std::string path = "tmp_trace_fit.csv";
    // pure leading-order trace 12 t^{-2} for d = 2, m = 2 (a = 2)
    std::string body = "t,trace\n";
    for (double t : {0.05, 0.04, 0.03, 0.02})
        body += io::float17(t) + "," + io::float17(12.0 / (t * t)) + "\n";
    put_file(path, body);

    const auto parsed = io::trace_samples_from_csv(path);
    REQUIRE(parsed.size() == 4);
    REQUIRE(parsed[1].t == 0.04);

    const auto res = cli::run({"karamata", "--samples", path, "--d", "2", "--m", "2"});
    REQUIRE(res.exit_code == 0);
    const auto j = parse_doc(res);
    REQUIRE(j["result"]["nu0"].get<double>() == Approx(6.0).epsilon(1e-6));
    REQUIRE(j["result"]["quality"].get<double>() < 1e-8);
    std::remove(path.c_str());

    const auto gone = cli::run({"karamata", "--samples", "no_such.csv", "--d", "2", "--m", "2"});
    REQUIRE(gone.exit_code == 2);
    REQUIRE(parse_doc(gone)["error"] == "IOError");
}

TEST_CASE("model files drive the check subcommand") {
    const std::string path = "tmp_model_check.json";
    put_file(path, R"({"d":2,"abs_eigs":[1.0,1.0],"mu":[{"re":0.5,"im":0.0}],"tol":1e-9})");
    const auto ok = cli::run({"check", "--file", path, "--condition", "rockland"});
    REQUIRE(ok.exit_code == 0);
    const auto jo = parse_doc(ok);
    REQUIRE(jo["result"]["condition"] == "rockland");
    REQUIRE(jo["result"]["pass"] == true);
    REQUIRE(jo["result"]["witness"].is_null());

    put_file(path, R"({"d":2,"abs_eigs":[1.0,1.0],"mu":[{"re":2.0,"im":0.0}]})");
    const auto bad = cli::run({"check", "--file", path, "--condition", "rockland"});
    REQUIRE(bad.exit_code == 0);  // a failed condition is still a clean run
    const auto jb = parse_doc(bad);
    REQUIRE(jb["result"]["pass"] == false);
    const auto& w = jb["result"]["witness"];
    REQUIRE(w["mu_index"] == 0);
    REQUIRE(w["mu"]["re"].get<double>() == 2.0);
    REQUIRE(w["distance"].get<double>() == Approx(0.0).margin(1e-12));
    REQUIRE_FALSE(w["note"].get<std::string>().empty());

    const auto weaker = cli::run({"check", "--file", path, "--condition", "weaker"});
    REQUIRE(parse_doc(weaker)["result"]["pass"] == false);

    // contact-type window via Xk: d = 2, full rank, middle degree excluded
    const auto x0 = cli::run({"check", "--file", path, "--condition", "Xk", "--k", "0"});
    REQUIRE(parse_doc(x0)["result"]["pass"] == true);
    const auto x1 = cli::run({"check", "--file", path, "--condition", "Xk", "--k", "1"});
    const auto jx = parse_doc(x1);
    REQUIRE(jx["result"]["pass"] == false);
    REQUIRE(jx["result"]["witness"]["note"].get<std::string>().find("window") !=
            std::string::npos);

    const auto noq = cli::run({"check", "--file", path, "--condition", "Yq"});
    REQUIRE(noq.exit_code == 2);
    REQUIRE(parse_doc(noq)["error"] == "RangeViolation");

    put_file(path, R"({"d":3,"abs_eigs":[0.0,0.0,0.0],"mu":[]})");
    const auto odd = cli::run({"check", "--file", path, "--condition", "Yq", "--q", "0"});
    REQUIRE(odd.exit_code == 2);
    REQUIRE(parse_doc(odd)["error"] == "RangeViolation");

    put_file(path, "{not json");
    const auto mal = cli::run({"check", "--file", path, "--condition", "rockland"});
    REQUIRE(mal.exit_code == 2);
    REQUIRE(parse_doc(mal)["error"] == "ParseError");
    std::remove(path.c_str());
}

TEST_CASE("matrix files drive the mellin subcommand") {
    const std::string path = "tmp_matrix_power.json";
    put_file(path, R"({"p":[[0.0,0.0],[0.0,5.0]]})");
    const auto res = cli::run({"mellin", "--matrix", path, "--s", "1"});
    REQUIRE(res.exit_code == 0);
    const auto j = parse_doc(res);
    REQUIRE(j["result"]["matrix"][1][1].get<double>() == Approx(0.2).epsilon(1e-9));
    REQUIRE(j["result"]["matrix"][0][0].get<double>() == Approx(0.0).margin(1e-10));

    put_file(path, R"({"p":[[0.0,0.0],[0.0,5.0]],"projector":[[1.0,0.0],[0.0,0.0]]})");
    const auto proj = cli::run({"mellin", "--matrix", path, "--s", "1"});
    REQUIRE(proj.exit_code == 0);

    put_file(path, R"({"p":[[-1.0,0.0],[0.0,1.0]]})");
    const auto neg = cli::run({"mellin", "--matrix", path, "--s", "1"});
    REQUIRE(neg.exit_code == 2);
    REQUIRE(parse_doc(neg)["error"] == "RangeViolation");

    put_file(path, R"({"p":[[1.0,0.0],[0.0,1.0]]})");
    const auto szero = cli::run({"mellin", "--matrix", path, "--s", "0"});
    REQUIRE(szero.exit_code == 2);
    std::remove(path.c_str());
}

TEST_CASE("nilmanifold and predict and mass subcommands") {
    const auto ni = cli::run({"nilmanifold", "--N", "4", "--count", "3"});
    REQUIRE(ni.exit_code == 0);
    const auto jn = parse_doc(ni);
    REQUIRE(jn["result"]["N"] == 4);
    REQUIRE(jn["result"]["eigenvalues"].size() == 3);
    REQUIRE(jn["result"]["eigenvalues"][0].get<double>() == Approx(0.0).margin(1e-10));
    REQUIRE(jn["result"]["wallclock"].get<double>() > 0.0);

    const auto big = cli::run({"nilmanifold", "--N", "17", "--count", "1"});
    REQUIRE(big.exit_code == 2);
    REQUIRE(parse_doc(big)["error"] == "GridTooLarge");

    const auto pc = cli::run({"predict", "--d", "2", "--m", "2", "--nu0", "6", "--lambda", "4"});
    REQUIRE(pc.exit_code == 0);
    REQUIRE(parse_doc(pc)["result"]["value"].get<double>() == Approx(96.0).epsilon(1e-12));
    const auto ph = cli::run({"predict", "--d", "2", "--m", "2", "--nu0", "6", "--t", "0.5"});
    REQUIRE(parse_doc(ph)["result"]["value"].get<double>() == Approx(48.0).epsilon(1e-12));
    const auto pboth = cli::run({"predict", "--d", "2", "--m", "2", "--nu0", "6",
                                 "--lambda", "4", "--t", "0.5"});
    REQUIRE(pboth.exit_code == 2);  // modes are mutually exclusive
    const auto pnone = cli::run({"predict", "--d", "2", "--m", "2", "--nu0", "6"});
    REQUIRE(pnone.exit_code == 2);

    const auto ma = cli::run({"mass", "--n", "1", "--t", "0.25", "--trunc", "3"});
    REQUIRE(ma.exit_code == 0);
    REQUIRE(parse_doc(ma)["result"]["value"].get<double>() == Approx(1.0).epsilon(1e-5));
}
