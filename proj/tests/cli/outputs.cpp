#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string cli, scratch;
int failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("%s %s\n", ok ? "ok  " : "FAIL", what.c_str());
    failures += !ok;
}

int run(const std::string& args) {
    const std::string cmd = cli + " " + args;
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        out.push_back(line);
    }
    return out;
}

std::vector<double> fields(const std::string& line, std::size_t skip = 0) {
    std::vector<double> v;
    std::istringstream in(line);
    std::string f;
    for (std::size_t i = 0; std::getline(in, f, ','); ++i)
        if (i >= skip) v.push_back(std::stod(f));
    return v;
}

// Header line "# E0..E9=a,b,..." -> first value.
double header_e0(const std::string& text) {
    const auto pos = text.find("# E0..E9=");
    if (pos == std::string::npos) return NAN;
    return std::stod(text.substr(pos + 9));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: cli_outputs NILHEAT SCRATCH_DIR\n");
        return 2;
    }
    cli = argv[1];
    scratch = argv[2];

    {
        const std::string out = scratch + "/free.csv";
        const int rc = run("propagator --alpha 0 --beta 1 --time 0.25 --grid 8,16385 --stride 256 --out " + out);
        check(rc == 0, "propagator alpha = 0 exits 0");
        const double want = std::exp(-0.25) / std::sqrt(4 * std::numbers::pi * 0.25);
        double worst = 0;
        int diagonal = 0;
        for (const std::string& line : data_lines(slurp(out))) {
            const std::vector<double> v = fields(line);
            if (v[0] == v[1] && std::abs(v[0]) <= 4.0) {
                worst = std::max(worst, std::abs(v[2] - want) / want);
                ++diagonal;
            }
        }
        check(diagonal > 10 && worst <= 1e-6, "propagator constant potential diagonal, relative error " + std::to_string(worst));
    }
    {
        const std::string out = scratch + "/quartic.csv";
        check(run("propagator --alpha 1 --beta 0 --time 0.5 --stride 64 --out " + out) == 0, "propagator alpha = 1 exits 0");
        const double e0 = header_e0(slurp(out));
        check(std::abs(e0 - 1.0604) <= 1e-3, "propagator header E0 = " + std::to_string(e0));
    }
    {
        const std::string a = scratch + "/mc_a.csv", b = scratch + "/mc_b.csv", c = scratch + "/mc_c.csv";
        const std::string args = "mc --group g4 --time 0.25 --paths 100000 --steps 100 --seed 42 --out ";
        check(run(args + a + " > " + scratch + "/mc_summary.txt") == 0, "mc exits 0");
        check(run(args + b + " --threads 1 > /dev/null") == 0 && run(args + c + " --threads 4 > /dev/null") == 0,
              "mc reruns exit 0");
        const std::string ta = slurp(a);
        check(!ta.empty() && ta == slurp(b) && ta == slurp(c), "mc outputs are byte-identical across runs and thread counts");
        const std::string summary = slurp(scratch + "/mc_summary.txt");
        const auto pos = summary.find("# x1 ");
        bool ok = pos != std::string::npos;
        if (ok) {
            const double var = std::stod(summary.substr(summary.find("var=", pos) + 4));
            const double se = std::stod(summary.substr(summary.find("var_se=", pos) + 7));
            ok = std::abs(var - 0.5) <= 3 * se;
            check(ok, "mc summary var(x1) = " + std::to_string(var) + " within 3 stderr of 0.5");
        } else {
            check(false, "mc summary has x1 statistics");
        }
        const std::string g5 = scratch + "/mc_g5.csv";
        check(run("mc --group g5 --time 0.25 --paths 2000 --steps 100 --out " + g5 + " > " + scratch + "/mc_g5.txt") == 0 &&
                  slurp(scratch + "/mc_g5.txt").find("# x5 ") != std::string::npos,
              "g5 summary includes x5");
    }
    {
        const std::string a = scratch + "/k_a.csv", b = scratch + "/k_b.csv";
        const std::string args = "kernel --group g4 --point 0,0,0,0 --point 0.3,-0.2,0.1,0.05 --time 0.25 --out ";
        check(run(args + a + " --threads 1") == 0 && run(args + b + " --threads 4") == 0, "kernel exits 0");
        const std::vector<std::string> ra = data_lines(slurp(a)), rb = data_lines(slurp(b));
        bool same = ra.size() == 2 && ra.size() == rb.size();
        // Every column except the trailing wall-clock time must agree exactly.
        for (std::size_t i = 0; same && i < ra.size(); ++i)
            same = ra[i].substr(0, ra[i].rfind(',')) == rb[i].substr(0, rb[i].rfind(','));
        check(same, "kernel rows agree across thread counts apart from wall_ms");
        check(same && fields(ra[0], 1)[5] > 0.0, "kernel value at the identity is positive");
    }
    {
        const std::string cfg = scratch + "/kernel.cfg", out = scratch + "/k_cfg.json";
        std::ofstream(cfg) << "group = g4\npoint = 0,0,0,0\ntime = 0.5\nformat = json\n";
        check(run("kernel --config " + cfg + " --time 0.25 --out " + out) == 0, "kernel with a config file exits 0");
        const std::string text = slurp(out);
        check(text.find("\"time\": \"0.25\"") != std::string::npos, "command-line flags override the config file");
        check(text.find("\"rows\"") != std::string::npos, "json output has rows");
    }
    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
