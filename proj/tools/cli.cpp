#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "tridec/completion.hpp"
#include "tridec/counting.hpp"
#include "tridec/graph.hpp"
#include "tridec/greedy.hpp"
#include "tridec/pipeline.hpp"
#include "tridec/templ.hpp"

using namespace tridec;

namespace {

TemplateMode parse_mode(const std::string& m) {
    if (m == "paper") return TemplateMode::paper;
    if (m == "dense") return TemplateMode::dense;
    throw CLI::ValidationError("--mode", "expected paper, dense or punctured:EPS");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Randomised algebraic triangle decompositions and design counting"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "master seed")->capture_default_str();

    // ---- check ----------------------------------------------------------
    auto* check = app.add_subcommand("check", "graph facts: density, divisibility, typicality");
    std::string check_graph;
    int check_h = 4;
    check->add_option("--graph", check_graph, "graph file")->required();
    check->add_option("--hmax", check_h, "typicality set size bound");

    // ---- template -------------------------------------------------------
    auto* tmpl = app.add_subcommand("template", "build a random algebraic template");
    std::string tmpl_graph, tmpl_mode = "paper";
    bool tmpl_json = false;
    tmpl->add_option("--graph", tmpl_graph, "graph file")->required();
    tmpl->add_option("--mode", tmpl_mode, "paper|dense");
    tmpl->add_flag("--json", tmpl_json, "emit the template as JSON");

    // ---- removal --------------------------------------------------------
    auto* rem = app.add_subcommand("removal", "random triangle removal trajectory");
    std::string rem_graph, rem_csv;
    int rem_n = 0;
    std::int64_t rem_stop = -1;
    double rem_b = 0.001;
    rem->add_option("--graph", rem_graph, "graph file (else --n gives K_n)");
    rem->add_option("--n", rem_n, "complete graph order");
    rem->add_option("--stop", rem_stop, "stop at this many edges (else nibble with --b)");
    rem->add_option("--b", rem_b, "nibble boundedness parameter");
    rem->add_option("--csv", rem_csv, "write trajectory CSV here");

    // ---- decompose ------------------------------------------------------
    auto* dec = app.add_subcommand("decompose", "full triangle decomposition pipeline");
    std::string dec_graph, dec_mode = "paper", dec_json_path;
    int dec_a = 0, dec_retries = 20;
    std::uint64_t dec_budget = 20000;
    bool dec_json = false;
    dec->add_option("--graph", dec_graph, "graph file (omit for punctured mode)");
    dec->add_option("--mode", dec_mode, "paper|dense|punctured:EPS");
    dec->add_option("--a", dec_a, "field exponent for punctured instances");
    double dec_c = -1.0;
    dec->add_option("--c", dec_c, "pseudorandomness constant c (default 1e-4; 1e-9 in punctured mode)");
    dec->add_option("--retries", dec_retries, "max stage retries");
    dec->add_option("--budget", dec_budget, "per-step sampling budget");
    dec->add_flag("--json", dec_json, "emit the result as JSON on stdout");
    dec->add_option("--json-out", dec_json_path, "write the JSON result to a file");

    // ---- count-sts ------------------------------------------------------
    auto* cnt = app.add_subcommand("count-sts", "exact Steiner triple system counts");
    int cnt_n = 7;
    bool cnt_large = false;
    std::string cnt_oracle = "backtrack";
    cnt->add_option("--n", cnt_n, "order")->required();
    cnt->add_flag("--allow-large", cnt_large, "permit n = 13 (minutes)");
    cnt->add_option("--oracle", cnt_oracle, "backtrack|dlx|serial");

    // ---- estimate-sts ---------------------------------------------------
    auto* est = app.add_subcommand("estimate-sts", "Monte-Carlo log STS lower bound");
    int est_n = 99, est_trials = 20;
    double est_stop = 1.6;
    est->add_option("--n", est_n, "order")->required();
    est->add_option("--trials", est_trials, "independent trials");
    est->add_option("--stop-exp", est_stop, "stop at ~n^exp edges");

    // ---- design-check ---------------------------------------------------
    auto* des = app.add_subcommand("design-check", "design divisibility and count prediction");
    std::int64_t des_n = 0, des_q = 0, des_r = 0, des_l = 1;
    des->add_option("--n", des_n)->required();
    des->add_option("--q", des_q)->required();
    des->add_option("--r", des_r)->required();
    des->add_option("--lambda", des_l);

    // ---- shuffle-test ---------------------------------------------------
    auto* shf = app.add_subcommand("shuffle-test", "shuffle counts vs prediction on a dense instance");
    int shf_a = 5, shf_targets = 10;
    std::uint64_t shf_budget = 1u << 20;
    shf->add_option("--a", shf_a, "field exponent (n = 2^a - 1)");
    shf->add_option("--targets", shf_targets, "octahedral targets to examine");
    shf->add_option("--budget", shf_budget, "exhaustive/sample threshold");

    CLI11_PARSE(app, argc, argv);
    Rng rng(seed);

    try {
        if (*check) {
            const Graph g = load_graph_file(check_graph);
            TypicalityReport rep = typicality_deviation(g, check_h, rng);
            std::printf("n=%d edges=%lld density=%.6f tridivisible=%d\n", g.n(),
                        static_cast<long long>(g.edge_count()), density(g).value(),
                        is_tridivisible(g) ? 1 : 0);
            std::printf("typicality: worst_dev=%.4f ensemble_dev=%.4f sets=%lld sampled=%d\n",
                        rep.worst_dev, rep.ensemble_dev,
                        static_cast<long long>(rep.sets_examined), rep.sampled ? 1 : 0);
            return 0;
        }
        if (*tmpl) {
            const Graph g = load_graph_file(tmpl_graph);
            const Template t = build_template(g, parse_mode(tmpl_mode), rng);
            if (tmpl_json) {
                std::cout << template_to_json(t) << "\n";
                return 0;
            }
            TemplateStats st = template_stats(g, t, 4, rng);
            std::printf("a=%d gamma=%.4f window=%d |T|=%lld\n", t.a, t.gamma,
                        st.paper_window ? 1 : 0, static_cast<long long>(st.t_size));
            std::printf("d(G*)=%.5f predicted=%.5f rel_error=%.4f\n", st.d_gstar,
                        st.predicted, st.rel_error);
            std::printf("pair typicality: worst=%.4f ensemble=%.4f\n",
                        st.pair_typicality.worst_dev, st.pair_typicality.ensemble_dev);
            return 0;
        }
        if (*rem) {
            Graph g = rem_graph.empty() ? Graph::complete(rem_n) : load_graph_file(rem_graph);
            if (g.n() < 3) throw CLI::ValidationError("removal", "graph too small");
            RemovalResult r = rem_stop >= 0 ? run_triangle_removal(g, rem_stop, rng)
                                            : nibble(g, rem_b, rng);
            std::printf("steps=%zu leave_edges=%lld aborted=%d\n", r.N.tris.size(),
                        static_cast<long long>(r.leave.edge_count()),
                        r.trajectory.aborted ? 1 : 0);
            EnvelopeReport rep = check_trajectory(r.trajectory, rem_b, graph_stats(g));
            for (const auto& e : rep.entries)
                std::printf("p=%.2f Q=%lld~%.0f(ok=%d) Te=%.1f~%.1f(ok=%d) degdev=%.1f<%.1f(ok=%d)\n",
                            e.p, static_cast<long long>(e.q_observed), e.q_predicted,
                            e.q_ok, e.te_mean, e.te_predicted, e.te_ok,
                            e.deg_max_abs_dev, e.deg_slack, e.deg_ok);
            if (!rem_csv.empty()) {
                std::ofstream out(rem_csv);
                write_trajectory_csv(r.trajectory, out);
            }
            return 0;
        }
        if (*dec) {
            PipelineConfig cfg;
            cfg.seed = seed;
            cfg.max_retries = dec_retries;
            cfg.budget = dec_budget;
            DecompositionResult result;
            if (dec_c > 0) cfg.c = dec_c;
            else if (dec_mode.rfind("punctured", 0) == 0) cfg.c = 1e-9;
            if (dec_mode.rfind("punctured", 0) == 0) {
                double eps = 0.0;
                if (auto p = dec_mode.find(':'); p != std::string::npos)
                    eps = std::stod(dec_mode.substr(p + 1));
                if (dec_a < 5) throw CLI::ValidationError("--a", "punctured mode needs --a >= 5");
                cfg.mode = TemplateMode::dense;
                cfg.epsilon = eps;
                Rng irng(derive_seed(seed, "instance", 0));
                PuncturedInstance inst = make_punctured_instance(dec_a, eps, irng);
                result = decompose(inst.g, inst.tpl, cfg);
                result.mode = dec_mode;
            } else {
                if (dec_graph.empty())
                    throw CLI::ValidationError("--graph", "required unless mode is punctured");
                cfg.mode = parse_mode(dec_mode);
                result = decompose(load_graph_file(dec_graph), cfg);
            }
            const std::string json = result_to_json(result);
            if (!dec_json_path.empty()) std::ofstream(dec_json_path) << json << "\n";
            if (dec_json) {
                std::cout << json << "\n";
            } else {
                for (const auto& s : result.stages)
                    std::printf("[%s] %s  %s (%.2fs)\n", s.ok ? "ok" : "FAIL",
                                s.name.c_str(), s.detail.c_str(), s.seconds);
                std::printf("status: %s  |M|=%zu\n", result.status.c_str(),
                            result.M.tris.size());
            }
            return result.success ? 0 : 2;
        }
        if (*cnt) {
            std::uint64_t c;
            if (cnt_oracle == "dlx")
                c = exact_cover_count_sts(cnt_n);
            else if (cnt_oracle == "serial")
                c = brute_force_count_sts_serial(cnt_n, cnt_large);
            else
                c = brute_force_count_sts(cnt_n, cnt_large);
            std::printf("STS(%d) = %llu\n", cnt_n, static_cast<unsigned long long>(c));
            return 0;
        }
        if (*est) {
            CountEstimate e = estimate_log_sts(est_n, est_stop, est_trials, rng);
            std::printf("n=%d trials=%d\n", e.n, e.trials);
            std::printf("L1=%.3Lf L2=%.3Lf lower=%.3Lf cv=%.4Lf\n", e.l1, e.l2,
                        e.log_sts_lower, e.l1_cv);
            std::printf("prediction (n^2/6)(log n - 2) = %.3Lf\n", e.wilson_prediction);
            std::printf("sum log p = %.3Lf target %.3Lf\n", e.sum_log_p,
                        e.sum_log_p_target);
            return 0;
        }
        if (*des) {
            const bool div = design_divisibility(des_n, des_q, des_r, des_l);
            std::printf("divisibility: %s\n", div ? "pass" : "fail");
            if (div)
                std::printf("log count prediction = %.4Lf\n",
                            wilson_design_log_formula(des_n, des_q, des_r, des_l));
            return 0;
        }
        if (*shf) {
            Rng irng(derive_seed(seed, "instance", 0));
            PuncturedInstance inst = make_punctured_instance(shf_a, 0.0, irng);
            int found = 0;
            for (std::uint64_t tries = 0; found < shf_targets && tries < 100000; ++tries) {
                const int u = static_cast<int>(rng.below(inst.g.n()));
                const int v = static_cast<int>(rng.below(inst.g.n()));
                const int w = static_cast<int>(rng.below(inst.g.n()));
                if (u == v || v == w || u == w) continue;
                const Triple z = Triple::make(u, v, w);
                if (!is_octahedral(z, inst.g, inst.tpl)) continue;
                CountReport rep = count_shuffles(inst.g, inst.tpl, z, shf_budget, rng);
                std::printf("z=(%d,%d,%d) exact=%d valid=%llu/%llu estimate=%.1f predicted=%.3g\n",
                            z.a, z.b, z.c, rep.exact ? 1 : 0,
                            static_cast<unsigned long long>(rep.valid),
                            static_cast<unsigned long long>(rep.examined),
                            rep.estimate, rep.predicted);
                ++found;
            }
            return 0;
        }
    } catch (const StageAbort& e) {
        std::cerr << "stage abort: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
