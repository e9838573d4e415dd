// twdecomp: partition a graph into node-disjoint subgraphs with verified
// treewidth lower bounds, plus analysis, Erdos-Posa and expander demos.

#include <chrono>
#include <random>
#include <fstream>
#include <sstream>
#include <iostream>

#include "CLI11.hpp"
#include "twd/apps.hpp"
#include "twd/conductance.hpp"
#include "twd/decompose.hpp"
#include "twd/expander.hpp"
#include "twd/io.hpp"
#include "twd/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitPipeline = 3;
constexpr int kExitUsage = 64;
constexpr int kExitNoInput = 66;

using twd::ordered_json;

twd::Graph load_or_exit(const std::string &path, bool zero_indexed) {
  std::ifstream probe(path);
  if (!probe) {
    std::cerr << "cannot open input file: " << path << "\n";
    std::exit(kExitNoInput);
  }
  std::stringstream ss;
  ss << probe.rdbuf();
  return twd::parse_graph(ss.str(), twd::format_for_path(path), zero_indexed);
}

void write_report(const ordered_json &report, const std::string &out_path) {
  std::string text = report.dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    out << text;
  }
}

std::uint64_t parse_seed(const std::string &text) {
  if (text == "random") return std::random_device{}();
  return std::stoull(text);
}

ordered_json base_report(const std::string &command, std::uint64_t seed) {
  ordered_json j;
  j["command"] = command;
  j["params"] = ordered_json::object();
  j["seed"] = seed;
  j["outcome"] = "failure";
  j["warnings"] = ordered_json::array();
  return j;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"large-treewidth graph decomposition toolkit"};
  app.set_help_flag("--help", "print help");  // frees -h / --h for params
  app.require_subcommand(1);

  // ---- decompose ----
  auto *dec = app.add_subcommand("decompose",
                                 "partition into h subgraphs of treewidth >= r");
  std::string dec_file, dec_out, dec_csv, dec_case = "auto";
  std::string dec_seed_text = "0";
  int dec_h = 0, dec_r = 0, dec_theorem = 1;
  bool dec_faithful = false, dec_zero = false;
  dec->add_option("file", dec_file, "graph file (.edgelist / .col / .dimacs)")
      ->required();
  dec->set_help_flag("--help");
  dec->add_option("--h", dec_h, "number of subgraphs")->required()
      ->check(CLI::PositiveNumber);
  dec->add_option("--r", dec_r, "treewidth lower bound per subgraph")
      ->required()
      ->check(CLI::PositiveNumber);
  dec->add_option("--theorem", dec_theorem, "pipeline (1 or 2)")
      ->check(CLI::Range(1, 2));
  dec->add_option("--seed", dec_seed_text,
                  "seed (default 0; 'random' draws entropy)");
  dec->add_option("--out", dec_out, "report path (default stdout)");
  dec->add_option("--case-rule", dec_case, "case dispatch: auto|beta|nk5");
  dec->add_flag("--faithful-constants", dec_faithful,
                "asymptotic parameter formulas and hard budget asserts");
  dec->add_flag("--zero-indexed", dec_zero, "edgelist vertices start at 0");
  dec->add_option("--csv", dec_csv, "write the phi trace as CSV");

  // ---- analyze ----
  auto *ana = app.add_subcommand("analyze", "treewidth bounds and structure");
  std::string ana_file, ana_out;
  std::uint64_t ana_seed = 0;
  bool ana_zero = false;
  ana->add_option("file", ana_file)->required();
  ana->add_option("--seed", ana_seed);
  ana->add_option("--out", ana_out);
  ana->add_flag("--zero-indexed", ana_zero, "edgelist vertices start at 0");

  // ---- verify ----
  auto *ver = app.add_subcommand("verify", "replay a report's certificates");
  std::string ver_graph, ver_report;
  ver->add_option("graph", ver_graph)->required();
  ver->add_option("report", ver_report)->required();

  // ---- ep ----
  auto *ep = app.add_subcommand("ep", "Erdos-Posa cycle packing / covering");
  std::string ep_file, ep_out, ep_strategy = "thomassen";
  int ep_k = 0, ep_mod = 0;
  bool ep_zero = false;
  ep->add_option("file", ep_file)->required();
  ep->add_flag("--zero-indexed", ep_zero, "edgelist vertices start at 0");
  ep->add_option("--k", ep_k)->required()->check(CLI::PositiveNumber);
  ep->add_option("--mod", ep_mod, "restrict to cycles of length 0 mod m");
  ep->add_option("--strategy", ep_strategy, "thomassen|dc");
  ep->add_option("--out", ep_out);

  // ---- expander ----
  auto *exp = app.add_subcommand("expander", "cut-matching game demo");
  int exp_n = 16, exp_rounds = 16;
  std::uint64_t exp_seed = 0;
  std::string exp_out;
  exp->add_option("--n", exp_n)->check(CLI::PositiveNumber);
  exp->add_option("--rounds", exp_rounds)->check(CLI::PositiveNumber);
  exp->add_option("--seed", exp_seed);
  exp->add_option("--out", exp_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*dec) {
      Timer timer;
      std::uint64_t dec_seed = parse_seed(dec_seed_text);
      twd::Graph g = load_or_exit(dec_file, dec_zero);
      twd::PipelineConfig cfg;
      cfg.seed = dec_seed;
      cfg.faithful_constants = dec_faithful;
      if (dec_case == "beta") cfg.case_rule = twd::PipelineConfig::CaseRule::beta_k2;
      else if (dec_case == "nk5")
        cfg.case_rule = twd::PipelineConfig::CaseRule::n_at_least_k5;

      ordered_json report = base_report("decompose", dec_seed);
      report["params"] = {{"h", dec_h}, {"r", dec_r}, {"theorem", dec_theorem},
                          {"file", dec_file}};
      report["config"] = {{"case_rule", dec_case},
                          {"faithful_constants", dec_faithful},
                          {"arv_factor", cfg.solver.arv_factor},
                          {"balance_gamma",
                           {cfg.balance_gamma.num, cfg.balance_gamma.den}},
                          {"exact_limit", cfg.solver.exact_limit},
                          {"terminal_enum_limit", cfg.solver.terminal_enum_limit},
                          {"case_psi_threshold", cfg.case_psi_threshold},
                          {"gate_slack", cfg.gate_slack},
                          {"c_len", cfg.c_len},
                          {"c_cong", cfg.c_cong},
                          {"retry_budget", cfg.retry_budget},
                          {"resample_budget", cfg.resample_budget}};
      twd::RunTrace trace;
      try {
        twd::DecompositionResult res =
            dec_theorem == 1 ? twd::decompose_thm1(g, dec_h, dec_r, cfg, &trace)
                             : twd::decompose_thm2(g, dec_h, dec_r, cfg, &trace);
        report["outcome"] = "success";
        report["result"] = twd::decomposition_to_json(res);
        report["timings"] = {{"total_ms", timer.ms()}};
        write_report(report, dec_out);
        if (!dec_csv.empty()) {
          std::ofstream csv(dec_csv);
          csv << "iteration,phi\n";
          for (std::size_t i = 0; i < res.trace.phi_history.size(); ++i)
            csv << (i + 1) << "," << res.trace.phi_history[i] << "\n";
        }
        return kExitOk;
      } catch (const twd::ParameterError &e) {
        report["outcome"] = "infeasible";
        report["error"] = e.what();
        report["timings"] = {{"total_ms", timer.ms()}};
        write_report(report, dec_out);
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
      } catch (const twd::Error &e) {
        report["outcome"] = "failure";
        report["error"] = e.what();
        ordered_json phi = ordered_json::array();
        for (long long p : trace.phi_history) phi.push_back(p);
        report["phi_trace"] = phi;
        report["events"] = trace.events;
        report["timings"] = {{"total_ms", timer.ms()}};
        write_report(report, dec_out);
        std::cerr << "pipeline failure: " << e.what() << "\n";
        return kExitPipeline;
      }
    }

    if (*ana) {
      Timer timer;
      twd::Graph g = load_or_exit(ana_file, ana_zero);
      twd::SolverConfig scfg;
      scfg.seed = ana_seed;
      ordered_json report = base_report("analyze", ana_seed);
      report["params"] = {{"file", ana_file}};
      ordered_json body;
      body["vertices"] = g.num_vertices();
      body["edges"] = g.num_edges();
      body["max_degree"] = g.num_vertices() ? g.max_degree() : 0;
      if (g.num_vertices() > 0) {
        auto bounds = twd::tw_bounds(g, scfg);
        body["tw_lower"] = bounds.lower;
        body["tw_upper"] = bounds.upper;
        body["tw_lower_witness"] = bounds.lower_witness_kind;
        if (bounds.upper_witness)
          body["tree_decomposition_pace"] = bounds.upper_witness->to_pace();
      }
      if (g.num_vertices() >= 3 && g.connected()) {
        auto cert = twd::find_well_linked_set(g, scfg);
        body["well_linked"] = twd::well_linked_certificate_to_json(cert);
      }
      if (g.num_edges() >= 2) {
        twd::SolverConfig ccfg = scfg;
        if (static_cast<int>(g.num_vertices()) > scfg.exact_limit)
          ccfg.mode = twd::SolverConfig::Mode::spectral;
        auto cut = twd::min_conductance_cut(g, ccfg);
        if (cut && cut->conductance)
          body["conductance"] = {{"value", cut->conductance->value()},
                                 {"exact", cut->exact}};
        auto profile = twd::decompose_high_conductance(g, scfg);
        ordered_json parts = ordered_json::array();
        for (const auto &p : profile.parts) {
          ordered_json pj;
          pj["size"] = p.vertices.size();
          if (p.psi) pj["psi"] = p.psi->value();
          pj["verified"] = p.verified_exact;
          parts.push_back(pj);
        }
        body["conductance_profile"] = {
            {"threshold", profile.threshold.value()},
            {"boundary_total", profile.boundary_total},
            {"parts", parts}};
      }
      report["outcome"] = "success";
      report["result"] = body;
      report["timings"] = {{"total_ms", timer.ms()}};
      write_report(report, ana_out);
      return kExitOk;
    }

    if (*ver) {
      twd::Graph g = load_or_exit(ver_graph, false);
      std::ifstream in(ver_report);
      if (!in) {
        std::cerr << "cannot open report: " << ver_report << "\n";
        return kExitNoInput;
      }
      ordered_json report = ordered_json::parse(in);
      auto outcome = twd::verify_report(g, report);
      if (outcome.ok) {
        std::cout << "verify: all certificates replay\n";
        return kExitOk;
      }
      for (const auto &p : outcome.problems) std::cerr << "verify: " << p << "\n";
      return 1;
    }

    if (*ep) {
      Timer timer;
      twd::Graph g = load_or_exit(ep_file, ep_zero);
      twd::EPConfig cfg;
      cfg.strategy = ep_strategy == "dc" ? twd::EPStrategy::divide_conquer
                                         : twd::EPStrategy::thomassen;
      ordered_json report = base_report("ep", 0);
      report["params"] = {{"file", ep_file}, {"k", ep_k}, {"mod", ep_mod},
                          {"strategy", ep_strategy}};
      twd::EPOutcome out = ep_mod <= 0 ? twd::ep_cycles(g, ep_k, cfg)
                                       : twd::ep_mod_cycles(g, ep_k, ep_mod, cfg);
      report["outcome"] = "success";
      report["result"] = twd::ep_outcome_to_json(out);
      report["timings"] = {{"total_ms", timer.ms()}};
      write_report(report, ep_out);
      return kExitOk;
    }

    if (*exp) {
      Timer timer;
      if (exp_n % 2 != 0) {
        std::cerr << "expander: --n must be even\n";
        return kExitUsage;
      }
      auto w = twd::cut_matching_game(exp_n, exp_rounds, exp_seed);
      ordered_json report = base_report("expander", exp_seed);
      report["params"] = {{"n", exp_n}, {"rounds", exp_rounds}};
      report["outcome"] = "success";
      report["result"] = {
          {"edges", w.graph.num_edges()},
          {"expansion", {w.expansion.num, w.expansion.den}},
          {"verification",
           w.verification == twd::ExpanderWitness::Verification::exhaustive
               ? "exhaustive"
               : "spectral"}};
      report["timings"] = {{"total_ms", timer.ms()}};
      write_report(report, exp_out);
      return kExitOk;
    }
  } catch (const twd::ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitNoInput;
  } catch (const twd::ParameterError &e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const twd::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
  return kExitUsage;
}
