// Command-line driver for the density toolkit.
//
//   qdl --mode verify-lemmas --q 5
//   qdl --mode one-level   --q 5 --g 2 --N 6 --alpha-re 0.01
//   qdl --mode two-level   --q 5 --g 2 --N 6 --alpha-re 0.013 --beta-re 0.029
//   qdl --mode ratio-average --q 13 --g 2 --alpha-re 0.02 --beta-re 0.03 \
//       --gamma-re 0.025 --delta-re 0.035
//   qdl --mode sweep --q 5 --g 1,2 --N 2..7 --alpha-re 0.013 --beta-re 0.029
//
// Exit codes: 0 pass, 1 suite failure, 2 config error, 3 numerical signal.

#include "qdl/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>

namespace {

volatile bool g_interrupted = false;
void on_sigint(int) { g_interrupted = true; }

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        size_t dots = tok.find("..");
        if (dots != std::string::npos) {
            int lo = std::stoi(tok.substr(0, dots));
            int hi = std::stoi(tok.substr(dots + 2));
            for (int v = lo; v <= hi; ++v) out.push_back(v);
        } else if (!tok.empty()) {
            out.push_back(std::stoi(tok));
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"one- and two-level densities of zeros of quadratic Dirichlet L-functions over F_q[x]"};
    qdl::RunConfig cfg;
    std::string mode = "one-level", g_str = "1", n_str = "3", tail = "geometric";
    double are = 0.01, aim = 0, bre = 0.02, bim = 0, cre = 0.025, cim = 0, dre = 0.035, dim = 0;
    app.add_option("--q", cfg.q, "field size, prime = 1 mod 4");
    app.add_option("--g", g_str, "genus (sweep mode accepts lists: 1,2 or 1..3)");
    app.add_option("--N", n_str, "degree cutoff of the density sum (lists in sweep mode)");
    app.add_option("--alpha-re", are);
    app.add_option("--alpha-im", aim);
    app.add_option("--beta-re", bre);
    app.add_option("--beta-im", bim);
    app.add_option("--gamma-re", cre, "denominator shift (ratio-average mode)");
    app.add_option("--gamma-im", cim);
    app.add_option("--delta-re", dre, "denominator shift (ratio-average mode)");
    app.add_option("--delta-im", dim);
    app.add_option("--mode", mode, "verify-lemmas | one-level | two-level | ratio-average | sweep");
    app.add_option("--tail-variant", tail, "paper | geometric");
    app.add_option("--cutoff", cfg.cutoff, "prime-degree cutoff for prime sums (default max(30, 4g+10))");
    app.add_option("--order", cfg.order, "series truncation order (default N+2)");
    app.add_option("--precision", cfg.precision, "double | dd (compensated reductions)");
    app.add_option("--out", cfg.out, "output path (default stdout)");
    app.add_option("--threads", cfg.threads, "worker threads (results are thread-count independent)");
    app.add_option("--seed", cfg.seed, "seed for the factorization splitter");
    CLI11_PARSE(app, argc, argv);

    try {
        cfg.alpha = {are, aim};
        cfg.beta = {bre, bim};
        cfg.gamma = {cre, cim};
        cfg.delta = {dre, dim};
        cfg.g_list = parse_int_list(g_str);
        cfg.N_list = parse_int_list(n_str);
        if (mode == "verify-lemmas")
            cfg.mode = qdl::RunMode::verify_lemmas;
        else if (mode == "one-level")
            cfg.mode = qdl::RunMode::one_level;
        else if (mode == "two-level")
            cfg.mode = qdl::RunMode::two_level;
        else if (mode == "ratio-average")
            cfg.mode = qdl::RunMode::ratio_average;
        else if (mode == "sweep")
            cfg.mode = qdl::RunMode::sweep;
        else
            throw qdl::ConfigError("unknown mode " + mode);
        if (tail == "paper")
            cfg.tail_variant = qdl::TailVariant::paper;
        else if (tail == "geometric")
            cfg.tail_variant = qdl::TailVariant::geometric;
        else
            throw qdl::ConfigError("unknown tail variant " + tail);
        cfg.validate();

        std::ofstream file;
        std::ostream* os = &std::cout;
        if (!cfg.out.empty()) {
            file.open(cfg.out, std::ios::binary);
            if (!file) throw qdl::ConfigError("cannot open output file " + cfg.out);
            os = &file;
        }

        auto t0 = std::chrono::steady_clock::now();
        int exit_code = 0;
        switch (cfg.mode) {
            case qdl::RunMode::verify_lemmas: {
                qdl::ordered_json j = qdl::cmd_verify(cfg, exit_code);
                *os << j.dump(2) << "\n";
                break;
            }
            case qdl::RunMode::one_level:
                *os << qdl::cmd_one_level(cfg).dump();
                break;
            case qdl::RunMode::two_level:
                *os << qdl::cmd_two_level(cfg).dump();
                break;
            case qdl::RunMode::ratio_average:
                *os << qdl::cmd_ratio_average(cfg).dump();
                break;
            case qdl::RunMode::sweep:
                std::signal(SIGINT, on_sigint);
                qdl::cmd_sweep(cfg, [&](const std::string& line) { *os << line << "\n" << std::flush; },
                               &g_interrupted);
                break;
        }
        auto t1 = std::chrono::steady_clock::now();
        std::cerr << "wall time: " << std::chrono::duration<double>(t1 - t0).count() << " s\n";
        return exit_code;
    } catch (const qdl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qdl::PoleProximity& e) {
        std::cerr << "numerical signal: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
