#include "latvar/pgm.hpp"

#include "latvar/checks.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace latvar;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<std::string> split_csv(const std::string& row) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : row) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// Fresh working directory per test under /tmp.
std::string test_dir(const std::string& name) {
    const std::string dir = "/tmp/latvar_cli_" + name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

CliRun run_cli(const std::string& args, const std::string& dir) {
    const std::string cmd =
        "cd '" + dir + "' && '" + LATVAR_CLI_PATH + "' " + args + " >stdout.txt 2>stderr.txt";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(dir + "/stdout.txt");
    r.err = slurp(dir + "/stderr.txt");
    return r;
}

// 64x64 step image: left half black, right half white.
void write_step_image(const std::string& path) {
    PgmImage img;
    img.width = 64;
    img.height = 64;
    img.maxval = 255;
    img.pixels.assign(64 * 64, 0);
    for (int row = 0; row < 64; ++row)
        for (int col = 32; col < 64; ++col)
            img.pixels[static_cast<std::size_t>(row) * 64 + col] = 255;
    write_pgm(path, img);
}

}  // namespace

TEST(Ingest, TwoByTwoAsciiImage) {
    const std::string dir = test_dir("ingest2x2");
    spit(dir + "/a.pgm", "P2\n2 2\n255\n0 255\n255 0\n");
    const ScalarField f = ingest_pgm(dir + "/a.pgm");
    EXPECT_EQ(f.kind, FieldKind::U);
    const Grid& g = *f.grid;
    EXPECT_EQ(g.n, 2);
    EXPECT_DOUBLE_EQ(g.delta, 0.5);
    ASSERT_EQ(g.num_sites(), 4);
    const auto at = [&](int col, int row) {
        return f.values[g.site_of_box[static_cast<std::size_t>(g.box_index(col, row))]];
    };
    EXPECT_DOUBLE_EQ(at(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(at(1, 0), 1.0);
    EXPECT_DOUBLE_EQ(at(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(at(1, 1), 0.0);
}

TEST(Ingest, DistinctErrorTypes) {
    const std::string dir = test_dir("ingest_errors");

    const std::string missing = dir + "/not_there.pgm";
    try {
        ingest_pgm(missing);
        FAIL() << "expected PgmHeaderError";
    } catch (const PgmHeaderError& e) {
        EXPECT_NE(std::string(e.what()).find(missing), std::string::npos)
            << "message should name the path: " << e.what();
    }

    spit(dir + "/magic.pgm", "P6\n1 1\n255\n\0");
    EXPECT_THROW(ingest_pgm(dir + "/magic.pgm"), PgmHeaderError);

    spit(dir + "/nodims.pgm", "P2\nxyz\n");
    EXPECT_THROW(ingest_pgm(dir + "/nodims.pgm"), PgmHeaderError);

    spit(dir + "/deep.pgm", std::string("P5\n2 2\n65535\n") + std::string(8, '\0'));
    EXPECT_THROW(ingest_pgm(dir + "/deep.pgm"), PgmMaxvalError);

    spit(dir + "/hot.pgm", "P2\n2 1\n10\n5 11\n");
    EXPECT_THROW(ingest_pgm(dir + "/hot.pgm"), PgmMaxvalError);

    spit(dir + "/short.pgm", std::string("P5\n4 4\n255\n") + std::string(5, '\7'));
    EXPECT_THROW(ingest_pgm(dir + "/short.pgm"), PgmTruncatedError);
}

TEST(Ingest, LargeImagePitch) {
    PgmImage img;
    img.width = 512;
    img.height = 512;
    img.maxval = 255;
    img.pixels.assign(512u * 512u, 7);
    const ScalarField f = ingest_pgm_image(img);
    EXPECT_DOUBLE_EQ(f.grid->delta, 1.0 / 512.0);
    EXPECT_EQ(f.grid->num_sites(), 512 * 512);
    EXPECT_NEAR(f.values[0], 7.0 / 255.0, 1e-15);
}

TEST(Pgm, WriteReadRoundtrip) {
    std::mt19937 rng(401);
    const CheckResult r = check_pgm_roundtrip(rng);
    EXPECT_TRUE(r.pass) << r.detail;
}

TEST(CliExit, NoSubcommandIsUsageError) {
    const std::string dir = test_dir("no_subcommand");
    EXPECT_EQ(run_cli("", dir).code, 2);
    EXPECT_EQ(run_cli("frobnicate", dir).code, 2);
}

TEST(CliExit, UnknownFlagIsUsageError) {
    const std::string dir = test_dir("unknown_flag");
    EXPECT_EQ(run_cli("profile1d --bogus 3", dir).code, 2);
}

TEST(CliExit, MissingInputIsUsageErrorNamingPath) {
    const std::string dir = test_dir("missing_input");
    const CliRun r = run_cli("segment /tmp/latvar_definitely_absent.pgm", dir);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("/tmp/latvar_definitely_absent.pgm"), std::string::npos) << r.err;
}

TEST(CliSegment, VerticalStepImage) {
    const std::string dir = test_dir("segment_step");
    write_step_image(dir + "/in.pgm");
    const CliRun r = run_cli("segment in.pgm --ell 0.125", dir);
    EXPECT_EQ(r.code, 0) << r.err;
    ASSERT_TRUE(fs::exists(dir + "/u.pgm"));
    ASSERT_TRUE(fs::exists(dir + "/v.pgm"));
    ASSERT_TRUE(fs::exists(dir + "/trace.csv"));
    ASSERT_TRUE(fs::exists(dir + "/summary.txt"));

    const auto trace = lines_of(slurp(dir + "/trace.csv"));
    ASSERT_GE(trace.size(), 2u);
    EXPECT_EQ(trace[0], "iter,F,G,fidelity,total");

    const std::string summary = slurp(dir + "/summary.txt");
    EXPECT_NE(summary.find("stop=tolerance"), std::string::npos) << summary;

    // The edge indicator drops along the step and recovers away from it
    // (transition width ~ epsilon = 8 pixels).
    const PgmImage v = read_pgm(dir + "/v.pgm");
    int minpix = 255;
    for (std::uint8_t p : v.pixels) minpix = std::min(minpix, static_cast<int>(p));
    EXPECT_LT(minpix, 26);
    for (int row = 0; row < v.height; ++row)
        for (int col : {0, 4, 7, 56, 60, 63})
            EXPECT_GT(static_cast<int>(v.at(row, col)), 229)
                << "row " << row << " col " << col;
}

TEST(CliSegment, IterationCapGivesExitThree) {
    const std::string dir = test_dir("segment_cap");
    write_step_image(dir + "/in.pgm");
    const CliRun r = run_cli("segment in.pgm --ell 0.125 --max-iters 1 --tol 1e-16", dir);
    EXPECT_EQ(r.code, 3);
    const std::string summary = slurp(dir + "/summary.txt");
    EXPECT_NE(summary.find("stop=iteration_cap"), std::string::npos) << summary;
}

TEST(CliSweep, EmptyEllListWritesHeaderOnly) {
    const std::string dir = test_dir("sweep_empty");
    const CliRun r = run_cli("sweep --ell \"\" --sites 16", dir);
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(dir + "/regimes.csv"), "ell,F,G,fidelity,total,jump_detected\n");
}

TEST(CliProfile, DefaultTableAndDeterminism) {
    const std::string dir1 = test_dir("profile_a");
    const std::string dir2 = test_dir("profile_b");
    const CliRun r1 = run_cli("profile1d", dir1);
    const CliRun r2 = run_cli("profile1d", dir2);
    EXPECT_EQ(r1.code, 0) << r1.err;
    EXPECT_EQ(r2.code, 0) << r2.err;
    const std::string csv1 = slurp(dir1 + "/cvals.csv");
    EXPECT_EQ(csv1, slurp(dir2 + "/cvals.csv"));  // byte-identical reruns
    const auto rows = lines_of(csv1);
    ASSERT_EQ(rows.size(), 11u);  // header + 5 ells x n in {1,2}
    EXPECT_EQ(rows[0], "ell,n,c_closed,c_numeric_N200,abs_diff,root_r");
    EXPECT_EQ(split_csv(rows[1])[0], "0.25");
    EXPECT_EQ(split_csv(rows[1])[1], "1");
}

TEST(CliCell, SingleCellRowSchema) {
    const std::string dir1 = test_dir("cell_a");
    const std::string dir2 = test_dir("cell_b");
    const CliRun r1 = run_cli("cell --ell 1 --T 16 --angles 0", dir1);
    EXPECT_EQ(r1.code, 0) << r1.err;
    const CliRun r2 = run_cli("cell --ell 1 --T 16 --angles 0", dir2);
    EXPECT_EQ(r2.code, 0) << r2.err;
    const std::string csv = slurp(dir1 + "/phi.csv");
    EXPECT_EQ(csv, slurp(dir2 + "/phi.csv"));

    const auto rows = lines_of(csv);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "ell,angle_deg,nu_x,nu_y,T,phi_T,phi_extrapolated,lower_bound_ok,upper_bound_ok");
    const auto f = split_csv(rows[1]);
    ASSERT_EQ(f.size(), 9u);
    EXPECT_EQ(f[0], "1");
    EXPECT_EQ(f[1], "0");
    EXPECT_EQ(f[2], "1");
    EXPECT_EQ(f[3], "0");
    EXPECT_EQ(f[4], "16");
    const double phi = std::stod(f[5]);
    EXPECT_GT(phi, 1.5);
    EXPECT_LT(phi, 1.65);
    EXPECT_EQ(f[6], f[5]);  // single T: extrapolation degenerates to phi_T
    EXPECT_EQ(f[7], "1");
    EXPECT_EQ(f[8], "1");
}

TEST(CliConfig, FileValuesAndCommandLinePrecedence) {
    const std::string dir = test_dir("config_precedence");
    spit(dir + "/opts.ini", "ell=2\n");
    const CliRun r1 = run_cli("profile1d --config opts.ini", dir);
    EXPECT_EQ(r1.code, 0) << r1.err;
    auto rows = lines_of(slurp(dir + "/cvals.csv"));
    ASSERT_EQ(rows.size(), 3u);  // header + one ell x n in {1,2}
    EXPECT_EQ(split_csv(rows[1])[0], "2");

    const CliRun r2 = run_cli("profile1d --config opts.ini --ell 1", dir);
    EXPECT_EQ(r2.code, 0) << r2.err;
    rows = lines_of(slurp(dir + "/cvals.csv"));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(split_csv(rows[1])[0], "1");  // command line wins
}

TEST(CliConfig, UnknownKeyRejected) {
    const std::string dir = test_dir("config_unknown");
    spit(dir + "/opts.ini", "bogus=3\n");
    EXPECT_EQ(run_cli("profile1d --config opts.ini", dir).code, 2);
}
