// Copyright 2026 The heis-hsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "heis/hsp_states.hpp"
#include "heis/random.hpp"

namespace heis {

/// ExactIsometry applies the square-root isometry K deterministically on the symmetric
/// subspace. PaperProbabilistic additionally succeeds only with probability 1/2,
/// independent of the state.
enum class U2Mode { ExactIsometry, PaperProbabilistic };

std::string to_string(U2Mode mode);
/// Accepts "exact" and "probabilistic"; throws ParseError otherwise.
U2Mode parse_u2_mode(std::string_view text);

/// An instance together with everything the pipeline reuses across repetitions: the
/// exact weak Fourier sampling table and the character distributions used to recover j.
class PreparedInstance {
   public:
    explicit PreparedInstance(HiddenSubgroupInstance instance);
    PreparedInstance(FieldPrime p, SubgroupId s) : PreparedInstance(HiddenSubgroupInstance(p, s)) {}

    const HiddenSubgroupInstance& instance() const { return instance_; }
    FieldPrime prime() const { return instance_.prime(); }

    /// One entry per irrep in all_irreps order.
    const std::vector<SampledIrrepOutcome>& weak_sampling() const { return sampling_; }
    const std::vector<double>& irrep_weights() const { return weights_; }

    /// Fourier-sampling distribution over (alpha, beta) in Z_p^2, index alpha * p + beta,
    /// for the oracle restricted to N_i.
    const std::vector<double>& character_distribution(int i) const;

   private:
    HiddenSubgroupInstance instance_;
    std::vector<SampledIrrepOutcome> sampling_;
    std::vector<double> weights_;
    mutable std::mutex mutex_;
    mutable std::map<int, std::vector<double>> characters_;
};

struct GoodBranch {
    int k1 = 0;
    int k2 = 0;
    double probability = 0.0;
    /// The conditional states rho_k1 and rho_k2 of the two copies.
    DensityMatrix first, second;

    /// rho_k1 (x) rho_k2 on layout {p, p}.
    DensityMatrix joint() const { return tensor(first, second); }
};

struct RejectedBranch {
    IrrepLabel mu1, mu2;
};

using BranchOutcome = std::variant<GoodBranch, RejectedBranch>;

/// Every (k1, k2) with k1 + k2 != 0, with its exact probability.
std::vector<GoodBranch> good_branches(const PreparedInstance& prepared);
double good_branch_probability(const PreparedInstance& prepared);
double good_branch_closed_form(FieldPrime p);
/// Samples two irreps independently; `probability` of a sampled good branch is the
/// probability of that (k1, k2) pair.
BranchOutcome sample_good_branch(const PreparedInstance& prepared, Rng& rng);

struct PartnerOutcome {
    int m = 0;
    double probability = 0.0;
    /// The multiplicity register after measuring the irrep coordinate.
    DensityMatrix state;
    /// Set when the state is pure.
    std::optional<StateVector> pure;
};

/// Applies W to the joint state and measures the irrep coordinate register.
std::vector<PartnerOutcome> cg_and_measure_partner(FieldPrime p, int k1, int k2, const DensityMatrix& joint);
PartnerOutcome cg_and_measure_partner(FieldPrime p, int k1, int k2, const DensityMatrix& joint, Rng& rng);
/// Same for a product joint state, without forming the p^2-dimensional matrix.
std::vector<PartnerOutcome> cg_and_measure_partner(FieldPrime p, int k1, int k2, const DensityMatrix& first,
                                                   const DensityMatrix& second);
PartnerOutcome cg_and_measure_partner(FieldPrime p, int k1, int k2, const DensityMatrix& first,
                                      const DensityMatrix& second, Rng& rng);

/// a = i k1 k2 (2 (k1 + k2))^{-1}.
int quadratic_label(FieldPrime p, int i, int k1, int k2);
/// (1/sqrt p) sum_s omega^{a s^2} |s>.
StateVector cg_output_closed_form(FieldPrime p, int i, int k1, int k2);

/// K = sum_{t square != 0} |t>(<r_t| + <-r_t|)/sqrt 2 + |0><0|.
CMatrix u2_kraus(FieldPrime p);
/// Norm of the antisymmetric part of psi (under s -> -s).
double antisymmetric_weight(const StateVector& psi);

/// K psi for a symmetric input; throws AsymmetricInput when the antisymmetric part
/// exceeds the tolerance.
StateVector u2_transform(const StateVector& psi, double tol = default_tolerance());
/// Same, with the mode's success gate. Empty on failure.
std::optional<StateVector> u2_transform(const StateVector& psi, U2Mode mode, Rng& rng,
                                        double tol = default_tolerance());

/// U2 as an instrument on mixed inputs: success keeps K rho K^dagger, failure absorbs the
/// antisymmetric weight and, in PaperProbabilistic mode, half of the remainder.
struct U2Result {
    bool success = false;
    double success_probability = 0.0;
    std::optional<DensityMatrix> state;
};
U2Result u2_transform_mixed(const DensityMatrix& rho, U2Mode mode);
U2Result u2_transform_mixed(const DensityMatrix& rho, U2Mode mode, Rng& rng);

/// Distribution of x after the inverse Z_p Fourier transform.
std::vector<double> label_distribution(const DensityMatrix& post_u2);
std::vector<double> label_distribution(const StateVector& post_u2);
int extract_label(const DensityMatrix& post_u2, Rng& rng);
/// x 2 (k1 + k2) (k1 k2)^{-1}.
int recover_i_from_label(FieldPrime p, int x, int k1, int k2);
/// [1/sqrt 2 + (1 - 1/sqrt 2)/p]^2.
double label_success_closed_form(FieldPrime p);
/// Exact distribution of x for the instance A(i, 0), by simulating the pipeline from the
/// closed-form conditional states and averaging over m.
std::vector<double> exact_success_distribution(FieldPrime p, int i, int k1, int k2);

/// 3 ceil(log2 p) + 5.
std::size_t recover_j_sample_count(FieldPrime p);
/// Samples characters of Z_p^2 ~ N_i and solves alpha + beta j = 0. Throws
/// InconsistentSamples when the samples admit no single j.
int recover_j(const PreparedInstance& prepared, int i, Rng& rng);
/// Probability that recover_j returns `expected_j`.
double recover_j_success_probability(const PreparedInstance& prepared, int i, int expected_j);

/// Two oracle queries: f(e) == f((1, j, i)).
bool verify_candidate(const HiddenSubgroupInstance& instance, int i, int j);

/// One repetition. m and x are -1 when not reached; k1, k2 are 0 for a one-dimensional
/// outcome.
struct PipelineTrace {
    bool good_branch = false;
    int k1 = 0;
    int k2 = 0;
    int m = -1;
    bool u2_success = false;
    int x = -1;
    std::optional<int> i;
    std::optional<int> j;
    bool verified = false;

    bool operator==(const PipelineTrace&) const = default;
};

PipelineTrace run_once(const PreparedInstance& prepared, U2Mode mode, Rng& rng);

struct SolveConfig {
    U2Mode u2_mode = U2Mode::PaperProbabilistic;
    std::size_t max_repetitions = 50;
    /// When false, exhausting the repetitions throws RepetitionBudgetExhausted instead of
    /// returning the trivial subgroup.
    bool trivial_on_exhaustion = true;
};

struct SolveResult {
    SubgroupId subgroup;
    std::vector<PipelineTrace> traces;
};

SolveResult solve_hsp(const PreparedInstance& prepared, const SolveConfig& config, Rng& rng);

/// Exact probability of each stage of one repetition, and of a verified answer.
struct OneShotBreakdown {
    double good_branch = 0.0;
    /// Conditional on the good branch.
    double u2_success = 0.0;
    /// Conditional on U2 success.
    double label_correct = 0.0;
    /// Conditional on a correct label.
    double recover_j = 0.0;
    double verified = 0.0;
};

OneShotBreakdown exact_one_shot(const PreparedInstance& prepared, U2Mode mode);

}  // namespace heis
