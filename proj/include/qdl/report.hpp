#pragma once

// Run configuration, density reports, and the command implementations behind
// the CLI.  Reports are deterministic: identical configurations produce
// byte-identical JSON for any thread count, so the "timings" block carries
// work counters rather than wall-clock times (those go to stderr).

#include "charsums.hpp"
#include "densities.hpp"
#include "lfunc.hpp"
#include "ratios.hpp"

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace qdl {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class RunMode { verify_lemmas, one_level, two_level, ratio_average, sweep };

inline const char* to_string(RunMode m) {
    switch (m) {
        case RunMode::verify_lemmas: return "verify-lemmas";
        case RunMode::one_level: return "one-level";
        case RunMode::two_level: return "two-level";
        case RunMode::ratio_average: return "ratio-average";
        case RunMode::sweep: return "sweep";
    }
    return "?";
}

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    uint32_t q = 5;
    std::vector<int> g_list{1};
    std::vector<int> N_list{3};
    cplx alpha{0.01, 0};
    cplx beta{0.02, 0};
    cplx gamma{0.025, 0};
    cplx delta{0.035, 0};
    RunMode mode = RunMode::one_level;
    TailVariant tail_variant = TailVariant::geometric;
    int cutoff = -1; // -1: max(30, 4g+10)
    int order = -1;  // -1: N + 2
    std::string precision = "double";
    std::string out; // empty: stdout
    int threads = 1;
    uint64_t seed = 1;

    int g() const { return g_list.at(0); }
    int N() const { return N_list.at(0); }
    bool compensated() const { return precision == "dd"; }
    int cutoff_or_default(int gg) const { return cutoff > 0 ? cutoff : std::max(30, 4 * gg + 10); }
    int order_or_default(int NN) const { return order > 0 ? order : NN + 2; }

    void validate() const {
        if (!is_prime_u32(q) || q % 4 != 1) throw ConfigError("q must be a prime = 1 mod 4");
        if (g_list.empty() || N_list.empty()) throw ConfigError("g and N required");
        for (int gg : g_list)
            if (gg < 1) throw ConfigError("g >= 1 required");
        for (int NN : N_list)
            if (NN < 1) throw ConfigError("N >= 1 required");
        if (precision != "double" && precision != "dd") throw ConfigError("precision must be double or dd");
        if (threads < 1) throw ConfigError("threads >= 1 required");
        if (mode != RunMode::sweep && (g_list.size() != 1 || N_list.size() != 1))
            throw ConfigError("g and N ranges are only valid in sweep mode");
    }
};

inline ordered_json json_complex(cplx v) { return ordered_json{{"re", v.real()}, {"im", v.imag()}}; }

inline ordered_json json_config(const RunConfig& c, int g, int N) {
    ordered_json j;
    j["q"] = c.q;
    j["g"] = g;
    j["N"] = N;
    j["alpha"] = json_complex(c.alpha);
    j["beta"] = json_complex(c.beta);
    if (c.mode == RunMode::ratio_average) {
        j["gamma"] = json_complex(c.gamma);
        j["delta"] = json_complex(c.delta);
    }
    j["mode"] = to_string(c.mode);
    j["tail_variant"] = to_string(c.tail_variant);
    j["cutoff"] = c.cutoff_or_default(g);
    j["order"] = c.order_or_default(N);
    j["precision"] = c.precision;
    j["seed"] = c.seed;
    return j;
}

struct DensityReport {
    ordered_json j;
    std::string dump() const { return j.dump(2) + "\n"; }
};

inline double one_level_budget(uint32_t q, int g, int N) {
    return 10.0 * (std::pow((double)q, -(double)g) + std::pow((double)q, -(double)N / 2.0)) *
           std::pow((double)q, 0.1 * g);
}

inline double two_level_budget(uint32_t q, int g, int N) {
    return 10.0 * ((double)N * N * std::pow((double)q, (double)N / 2.0 - 2.0 * g) +
                   (double)N * std::pow((double)q, -(double)g / 2.0));
}

inline ordered_json json_tails(const std::vector<TailCertificate>& tails) {
    ordered_json arr = ordered_json::array();
    for (const TailCertificate& t : tails)
        arr.push_back(ordered_json{{"label", t.label}, {"cutoff", t.cutoff}, {"bound", t.bound}});
    return arr;
}

inline ordered_json json_classes(const ClassBreakdown& cb) {
    ordered_json j;
    for (auto& [k, v] : cb.classes) j[k] = json_complex(v);
    return j;
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

inline DensityReport cmd_one_level(const RunConfig& cfg) {
    cfg.validate();
    const Field F(cfg.q);
    const int g = cfg.g(), N = cfg.N();
    if (N >= 4 * g)
        throw ConfigError("one-level requires N < 4g (the rigorous Type-I computation assumes it)");
    if (std::abs(cfg.alpha) * g > 1.0)
        std::cerr << "warning: |alpha| g > 1; the recipe assumes |alpha| << 1/g\n";
    SumOptions opt{cfg.threads, cfg.compensated()};
    Family fam(F, g, cfg.threads);
    cplx emp = one_level(fam, N, cfg.alpha, opt);
    ClassBreakdown classes = one_level_classes(fam, N, cfg.alpha, opt);
    PredictionBreakdown pred = predict_one_level(F, g, N, cfg.alpha, cfg.cutoff_or_default(g));
    cplx residual = emp - pred.total;

    DensityReport rep;
    rep.j["schema_version"] = kSchemaVersion;
    rep.j["config"] = json_config(cfg, g, N);
    rep.j["empirical"] = json_complex(emp);
    rep.j["prediction"] = ordered_json{{"type0", json_complex(pred.type0)},
                                       {"type1", json_complex(pred.type1)},
                                       {"type2", json_complex(pred.type2)},
                                       {"total", json_complex(pred.total)}};
    rep.j["residual"] = json_complex(residual);
    rep.j["error_budget"] = one_level_budget(cfg.q, g, N);
    rep.j["classes"] = json_classes(classes);
    rep.j["flags"] = ordered_json{{"within_budget", std::abs(residual) <= one_level_budget(cfg.q, g, N)}};
    rep.j["tail_certificates"] = json_tails(pred.tails);
    rep.j["timings"] = ordered_json{{"h_count", fam.h_count()}, {"lambda_terms", N}};
    return rep;
}

inline DensityReport cmd_two_level(const RunConfig& cfg) {
    cfg.validate();
    const Field F(cfg.q);
    const int g = cfg.g(), N = cfg.N();
    if (N < 2) throw ConfigError("two-level requires N >= 2");
    cplx alpha = cfg.alpha, beta = cfg.beta;
    bool nudged = false;
    if (std::abs(alpha - beta) < 1e-6) {
        // the printed T_2 tail has a pole at alpha = beta that the density
        // itself does not share; evaluate at a reported nudge instead
        alpha += cplx(0, 1e-3);
        beta -= cplx(0, 1e-3);
        nudged = true;
        std::cerr << "note: shifts nudged by +-1e-3 i away from the alpha = beta tail pole\n";
    }
    SumOptions opt{cfg.threads, cfg.compensated()};
    Family fam(F, g, cfg.threads);
    cplx emp = two_level(fam, N, alpha, beta, opt);
    ClassBreakdown classes = two_level_classes(fam, N, alpha, beta, opt);
    PredictionBreakdown pred = predict_two_level(F, g, N, alpha, beta, cfg.tail_variant,
                                                 cfg.order_or_default(N), cfg.cutoff_or_default(g));
    cplx residual = emp - pred.total;
    bool typeII_caveat = N >= 4 * g;

    DensityReport rep;
    rep.j["schema_version"] = kSchemaVersion;
    rep.j["config"] = json_config(cfg, g, N);
    rep.j["empirical"] = json_complex(emp);
    rep.j["prediction"] = ordered_json{{"type0", json_complex(pred.type0)},
                                       {"type1", json_complex(pred.type1)},
                                       {"type2", json_complex(pred.type2)},
                                       {"total", json_complex(pred.total)},
                                       {"tail_variant", to_string(cfg.tail_variant)}};
    rep.j["residual"] = json_complex(residual);
    rep.j["error_budget"] = two_level_budget(cfg.q, g, N);
    rep.j["classes"] = json_classes(classes);
    // for N >= 4g the residual contains rigorous Type-II content the
    // prediction only models through the conjectured R_4
    rep.j["flags"] = ordered_json{{"typeII_caveat", typeII_caveat}, {"shift_nudged", nudged}};
    rep.j["tail_certificates"] = json_tails(pred.tails);
    rep.j["timings"] = ordered_json{{"h_count", fam.h_count()}, {"pair_degree_max", N - 1}};
    return rep;
}

inline DensityReport cmd_ratio_average(const RunConfig& cfg) {
    cfg.validate();
    const Field F(cfg.q);
    const int g = cfg.g();
    SumOptions opt{cfg.threads, cfg.compensated()};
    Family fam(F, g, cfg.threads);
    ShiftParams sh{cfg.alpha, cfg.beta, cfg.gamma, cfg.delta};
    cplx emp = ratio_average(fam, sh, opt);
    ValueWithTail recipe = ratio_recipe_value(F, g, cfg.alpha, cfg.beta, cfg.gamma, cfg.delta,
                                              cfg.cutoff_or_default(g));
    cplx residual = emp - recipe.value;
    double budget = 20.0 * std::pow((double)cfg.q, -0.9 * g) * std::abs(recipe.value);

    DensityReport rep;
    rep.j["schema_version"] = kSchemaVersion;
    rep.j["config"] = json_config(cfg, g, cfg.N());
    rep.j["empirical"] = json_complex(emp);
    rep.j["prediction"] = ordered_json{{"recipe", json_complex(recipe.value)}};
    rep.j["residual"] = json_complex(residual);
    rep.j["error_budget"] = budget;
    rep.j["flags"] = ordered_json{{"within_budget", std::abs(residual) <= budget}};
    rep.j["tail_certificates"] = json_tails({recipe.tail});
    rep.j["timings"] = ordered_json{{"h_count", fam.h_count()}};
    return rep;
}

// ---------------------------------------------------------------------------
// verify-lemmas
// ---------------------------------------------------------------------------

struct VerifySuite {
    std::string name;
    int64_t checked = 0;
    std::vector<ordered_json> counterexamples; // first 10
    bool pass() const { return counterexamples.empty(); }
    void fail(ordered_json j) {
        if (counterexamples.size() < 10) counterexamples.push_back(std::move(j));
    }
};

inline ordered_json cmd_verify(const RunConfig& cfg, int& exit_code) {
    cfg.validate();
    const Field F(cfg.q);
    const uint32_t q = cfg.q;
    std::vector<VerifySuite> suites;

    { // counting identities
        VerifySuite s{"counting"};
        for (int g = 1; g <= 2; ++g) {
            int64_t want = (int64_t)pow_u64(q, 2 * g + 1) - (int64_t)pow_u64(q, 2 * g);
            int64_t got = squarefree_count(F, 2 * g + 1, cfg.threads);
            ++s.checked;
            if (got != want) s.fail({{"g", g}, {"expected", want}, {"got", got}});
        }
        suites.push_back(std::move(s));
    }
    { // prime polynomial theorem
        VerifySuite s{"prime-polynomial-theorem"};
        for (int n = 1; pow_u64(q, n) <= 300000; ++n) {
            int64_t sum = 0;
            for_each_monic(F, n, [&](const Poly& f) { sum += von_mangoldt(F, f); });
            ++s.checked;
            if (sum != (int64_t)pow_u64(q, n)) s.fail({{"n", n}, {"got", sum}});
        }
        suites.push_back(std::move(s));
    }
    { // reciprocity
        VerifySuite s{"reciprocity"};
        for (int da = 1; da <= 3; ++da)
            for (int db = 1; db <= 3; ++db) {
                if (pow_u64(q, da + db) > 200000) continue;
                for_each_monic(F, da, [&](const Poly& A) {
                    for_each_monic(F, db, [&](const Poly& B) {
                        if (degree(gcd(F, A, B)) != 0) return;
                        ++s.checked;
                        if (residue_symbol(F, A, B) != residue_symbol(F, B, A))
                            s.fail({{"A", to_string(A)}, {"B", to_string(B)}});
                    });
                });
            }
        suites.push_back(std::move(s));
    }
    { // Lemma 2.1
        VerifySuite s{"lemma-2.1-squarefree-decomposition"};
        int maxd = q == 5 ? 4 : 2;
        for (int df = 1; df <= maxd; ++df)
            for_each_monic(F, df, [&](const Poly& f) {
                auto [lhs, rhs] = squarefree_char_sum_decomposition(F, f, 1);
                ++s.checked;
                if (lhs != rhs) s.fail({{"f", to_string(f)}, {"lhs", lhs}, {"rhs", rhs}});
            });
        suites.push_back(std::move(s));
    }
    { // Lemma 2.2
        VerifySuite s{"lemma-2.2-poisson"};
        int maxd = q == 5 ? 3 : 2;
        for (int df = 1; df <= maxd; ++df)
            for_each_monic(F, df, [&](const Poly& f) {
                for (int m = 0; m <= 4; ++m) {
                    ++s.checked;
                    cplx rhs = poisson_char_sum(F, f, m);
                    if (std::abs(rhs - cplx((double)monic_char_sum(F, f, m))) > 1e-9)
                        s.fail({{"f", to_string(f)}, {"m", m}, {"diff", std::abs(rhs - cplx((double)monic_char_sum(F, f, m)))}});
                }
            });
        suites.push_back(std::move(s));
    }
    { // Lemma 2.3 case table against the literal sum
        VerifySuite s{"lemma-2.3-gauss-sums"};
        for (int dp = 1; dp * 1 <= 4; ++dp) {
            if (pow_u64(q, dp) > 3000) break;
            std::vector<Poly> primes = primes_of_degree(F, dp);
            for (size_t i = 0; i < primes.size() && i < 8; ++i)
                for (int j = 1; dp * j <= 4; ++j) {
                    Poly f = poly_one();
                    for (int k = 0; k < j; ++k) f = mul(F, f, primes[i]);
                    std::vector<cplx> table = gauss_sum_table(F, f);
                    for (int dv = 0; dv < degree(f); ++dv)
                        for_each_monic(F, dv, [&](const Poly& V) {
                            ++s.checked;
                            cplx got = gauss_sum_closed(F, V, f);
                            if (std::abs(got - table[residue_index(F, V)]) > 1e-9)
                                s.fail({{"f", to_string(f)}, {"V", to_string(V)}});
                        });
                }
        }
        suites.push_back(std::move(s));
    }
    { // Lemma 2.6 average
        VerifySuite s{"lemma-2.6-average"};
        std::vector<Poly> H3 = squarefree_of_degree(F, 3);
        double tol = 10.0 * std::pow((double)q, -2.0);
        for (int df = 1; df <= 3; ++df) {
            if (pow_u64(q, df) > 3000) break;
            for_each_monic(F, df, [&](const Poly& f) {
                Poly f2 = mul(F, f, f);
                double avg = 0;
                for (const Poly& D : H3) avg += residue_symbol(F, D, f2);
                avg /= (double)H3.size();
                double pred = 1;
                for (auto& [p, e] : factorize(F, f).factors)
                    pred *= 1.0 - 1.0 / (std::pow((double)q, degree(p)) + 1.0);
                ++s.checked;
                if (std::abs(avg - pred) > tol)
                    s.fail({{"f", to_string(f)}, {"avg", avg}, {"pred", pred}});
            });
        }
        suites.push_back(std::move(s));
    }
    { // functional equation and RH circle over H_3
        VerifySuite s{"functional-equation-rh"};
        Family fam(F, 1, cfg.threads);
        const double circle = 1.0 / std::sqrt((double)q);
        for (uint64_t r = 0; r < (uint64_t)fam.h_count(); ++r) {
            LPolynomial L = fam.l_polynomial_row(r);
            ++s.checked;
            if (functional_equation_defect(F, L) != 0.0)
                s.fail({{"D", to_string(fam.discriminant(r))}, {"defect", functional_equation_defect(F, L)}});
            ZeroSet z = zeros(F, L);
            for (const cplx& root : z.zeros)
                if (std::abs(std::abs(root) - circle) > 1e-9)
                    s.fail({{"D", to_string(fam.discriminant(r))}, {"|root|", std::abs(root)}});
        }
        suites.push_back(std::move(s));
    }

    ordered_json out;
    out["schema_version"] = kSchemaVersion;
    out["config"] = json_config(cfg, cfg.g(), cfg.N());
    out["suites"] = ordered_json::array();
    bool all_pass = true;
    for (const VerifySuite& s : suites) {
        ordered_json js;
        js["name"] = s.name;
        js["checked"] = s.checked;
        js["pass"] = s.pass();
        js["counterexamples"] = ordered_json::array();
        for (const auto& c : s.counterexamples) js["counterexamples"].push_back(c);
        out["suites"].push_back(js);
        all_pass = all_pass && s.pass();
    }
    out["pass"] = all_pass;
    exit_code = all_pass ? 0 : 1;
    return out;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

inline std::string csv_complex(cplx v) {
    char buf[64];
    std::string s;
    std::snprintf(buf, sizeof buf, "%.17g", v.real());
    s = buf;
    s += ",";
    std::snprintf(buf, sizeof buf, "%.17g", v.imag());
    s += buf;
    return s;
}

inline const char* sweep_csv_header() {
    return "schema_version,q,g,N,alpha_re,alpha_im,beta_re,beta_im,tail_variant,"
           "empirical_re,empirical_im,type0_re,type0_im,type1_re,type1_im,type2_re,type2_im,"
           "total_re,total_im,residual_re,residual_im,error_budget,typeII_caveat";
}

// one CSV row per (g, N) grid point, deterministic order; rows are flushed as
// they are produced so an interrupted sweep leaves usable output
template <class Sink>
inline void cmd_sweep(const RunConfig& cfg, Sink&& write_line, const volatile bool* interrupted = nullptr) {
    cfg.validate();
    const Field F(cfg.q);
    write_line(sweep_csv_header());
    for (int g : cfg.g_list) {
        Family fam(F, g, cfg.threads);
        SumOptions opt{cfg.threads, cfg.compensated()};
        for (int N : cfg.N_list) {
            if (interrupted && *interrupted) {
                write_line("# truncated");
                return;
            }
            if (N < 2) continue;
            cplx emp = two_level(fam, N, cfg.alpha, cfg.beta, opt);
            PredictionBreakdown pred = predict_two_level(F, g, N, cfg.alpha, cfg.beta, cfg.tail_variant,
                                                         cfg.order_or_default(N), cfg.cutoff_or_default(g));
            cplx residual = emp - pred.total;
            char buf[96];
            std::string row;
            std::snprintf(buf, sizeof buf, "%d,%u,%d,%d,", kSchemaVersion, cfg.q, g, N);
            row = buf;
            row += csv_complex(cfg.alpha) + "," + csv_complex(cfg.beta) + ",";
            row += to_string(cfg.tail_variant);
            row += "," + csv_complex(emp) + "," + csv_complex(pred.type0) + "," + csv_complex(pred.type1) +
                   "," + csv_complex(pred.type2) + "," + csv_complex(pred.total) + "," + csv_complex(residual);
            std::snprintf(buf, sizeof buf, ",%.17g,%s", two_level_budget(cfg.q, g, N),
                          N >= 4 * g ? "true" : "false");
            row += buf;
            write_line(row);
        }
    }
}

} // namespace qdl
