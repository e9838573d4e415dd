#pragma once

#include <optional>
#include <string>

#include "twd/conductance.hpp"
#include "twd/cuts.hpp"
#include "twd/expander.hpp"
#include "twd/graph.hpp"
#include "twd/treewidth.hpp"
#include "twd/well_linked.hpp"

namespace twd {

class ParameterError : public Error {
public:
  explicit ParameterError(const std::string &msg) : Error(msg) {}
};

class PipelineError : public Error {
public:
  explicit PipelineError(const std::string &msg) : Error(msg) {}
};

struct PipelineConfig {
  enum class CaseRule { auto_conductance, beta_k2, n_at_least_k5 };

  int r_prime_override = 0;   // 0: rule max(Δ+1, Δ·r), or the faithful formula
  int r_dprime_override = 0;  // 0: rule max(4, 2(r+1)) capped by |V(H'')|
  CaseRule case_rule = CaseRule::auto_conductance;
  double case_psi_threshold = 0.15;  // auto: case 1 iff est. conductance below
  double beta_case = 8.0;            // beta_k2 rule: case 1 iff n >= beta*k^2
  double gate_slack = 1.0;           // feasibility: h*r <= ub*slack
  Rat alpha_wl{0, 1};                // 0: rule 1/(256*arv*log2 k), safety-capped
  Rat balance_gamma{1, 4};
  bool faithful_constants = false;  // asymptotic formulas, hard budget asserts
  double c_len = 4.0, c_cong = 4.0;
  int retry_budget = 8;
  int resample_budget = 200;  // thm2 random-partition attempts
  int degree_cap = 0;         // 0: reduce degree iff Δ > log2(n)^3
  int cmg_rounds = 0;         // 0: ceil(log2(|X|))^2
  std::uint64_t seed = 0;
  SolverConfig solver;

  SolverConfig solver_with_seed() const {
    SolverConfig s = solver;
    s.seed = seed;
    return s;
  }
};

/// Replayable treewidth lower-bound certificate for one subgraph.
struct TwCertificate {
  enum class Kind { exact_small, cycle, well_linked };
  Kind kind = Kind::exact_small;
  int bound = 0;        // proven tw lower bound
  VertexSet subgraph;   // certificate lives in g[subgraph]
  VertexSet witness_set;              // exact_small: DP subset; wl: terminals
  std::vector<VertexId> witness_cycle;  // cycle kind
  Rat alpha{1, 1};
  int delta = 1;
};

/// Re-check a certificate against the input graph. False plus reason when
/// the witness does not replay.
bool replay_certificate(const Graph &g, const TwCertificate &c,
                        std::string *why = nullptr);

/// Strongest verifiable lower-bound certificate for tw(g[sub]) >= r, or
/// nullopt if none of the exact routes reaches r.
std::optional<TwCertificate> certify_tw_at_least(const Graph &g,
                                                 const VertexSet &sub, int r,
                                                 const SolverConfig &cfg);

struct RunTrace {
  std::vector<long long> phi_history;
  std::vector<std::string> case_path;  // one entry per iteration
  std::vector<std::string> events;
  int iterations = 0;
  int resamples = 0;
};

struct DecompositionResult {
  std::vector<VertexSet> subgraphs;  // pairwise disjoint
  std::vector<TwCertificate> certificates;
  RunTrace trace;
};

struct Preprocessed {
  Graph working;  // the (sub)graph the pipeline operates on
  WellLinkedCertificate terminals;
  int max_degree = 0;
  bool degree_reduced = false;
  int reduction_cap_used = 0;
};

/// Estimate treewidth (exact or bounds), reduce degree when the cap rule
/// fires, and extract a verified well-linked terminal set.
Preprocessed preprocess(const Graph &g, const PipelineConfig &cfg);

struct Clustering {
  enum class Mode { thm1, thm2 };
  Mode mode = Mode::thm1;
  std::vector<VertexSet> clusters;
  ContractedGraph contracted;
  long long phi() const { return contracted.phi(); }
};

Clustering make_clustering(const Graph &g, std::vector<VertexSet> clusters,
                           Clustering::Mode mode);
Clustering singleton_clustering(const Graph &g, Clustering::Mode mode);

struct IterationOutcome {
  std::optional<DecompositionResult> result;  // success: h certified subgraphs
  std::optional<Clustering> next;             // re-clustered, phi dropped
  std::string case_taken;
  std::vector<std::string> events;
};

/// One potential-reduction step of the first pipeline: exactly one of
/// result / next is set, and next.phi() <= clustering.phi() - 1.
IterationOutcome iteration_thm1(const Graph &g, const Preprocessed &pre,
                                const Clustering &clustering, int h, int r,
                                const PipelineConfig &cfg);

/// Case 1 (balanced splitting) and Case 2 (expander packing), exposed for
/// direct testing. Throw PipelineError when their branch cannot complete.
IterationOutcome case1_balanced_split(const Graph &g, const Preprocessed &pre,
                                      const Clustering &clustering, int h, int r,
                                      const PipelineConfig &cfg);
IterationOutcome case2_expander_pack(const Graph &g, const Preprocessed &pre,
                                     const Clustering &clustering, int h, int r,
                                     const PipelineConfig &cfg);

struct EmbedOutcome {
  VertexSet supernodes;      // S: at most r' (slack-scaled) vertices of H'
  VertexSet subgraph;        // un-contracted vertex set in g
  TwCertificate certificate; // verified tw >= r
  EmbeddingPaths embedding;
  int expander_size = 0;     // r''
};

/// Split high-degree vertices, embed a small cubic expander along short
/// paths, and return the touched sub-cluster with a verified certificate
/// for the un-contracted subgraph.
EmbedOutcome embed_expander_witness(const Graph &g, const ContractedGraph &ctx,
                                    const Graph &h_part, int r,
                                    const PipelineConfig &cfg);

/// trace_out (optional) receives the run trace even when the pipeline
/// throws, so failures keep their full history.
DecompositionResult decompose_thm1(const Graph &g, int h, int r,
                                   const PipelineConfig &cfg,
                                   RunTrace *trace_out = nullptr);
DecompositionResult decompose_thm2(const Graph &g, int h, int r,
                                   const PipelineConfig &cfg,
                                   RunTrace *trace_out = nullptr);

}  // namespace twd
