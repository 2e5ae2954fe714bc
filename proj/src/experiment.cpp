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

#include "heis/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <nlohmann/json.hpp>
#include <sstream>

#include "heis/clebsch_gordan.hpp"
#include "heis/errors.hpp"
#include "heis/hsp_states.hpp"
#include "heis/pgm_crosscheck.hpp"

namespace heis {

namespace {

using Json = nlohmann::ordered_json;
using Index = Eigen::Index;

// Stream indices at or above this offset are reserved for full solve runs.
constexpr std::uint64_t kSolveStreamOffset = std::uint64_t{1} << 62;
// Stream used to resolve a "random" subgroup for single-subgroup commands.
constexpr std::uint64_t kSubgroupStream = ~std::uint64_t{0};
// Fidelity requirement for the PGM comparison.
constexpr double kFidelityTolerance = 1e-10;

template <typename E>
struct NameTable {
    E value;
    const char* name;
};

constexpr NameTable<Command> kCommands[] = {
    {Command::RepVerify, "rep-verify"},     {Command::StateVerify, "state-verify"},
    {Command::CgVerify, "cg-verify"},       {Command::SampleIrreps, "sample-irreps"},
    {Command::SolveHscp, "solve-hscp"},     {Command::SolveHsp, "solve-hsp"},
    {Command::PgmCompare, "pgm-compare"},   {Command::ExactDist, "exact-dist"},
};

template <typename E, std::size_t N>
std::string name_of(const NameTable<E> (&table)[N], E value) {
    for (const auto& row : table) {
        if (row.value == value) return row.name;
    }
    return "?";
}

template <typename E, std::size_t N>
E value_of(const NameTable<E> (&table)[N], std::string_view text, const char* what) {
    for (const auto& row : table) {
        if (text == row.name) return row.value;
    }
    throw ConfigInvalid(std::string("unknown ") + what + " '" + std::string(text) + "'");
}

constexpr NameTable<RunMode> kModes[] = {{RunMode::Exact, "exact"}, {RunMode::MonteCarlo, "montecarlo"}};
constexpr NameTable<OutputFormat> kFormats[] = {{OutputFormat::Json, "json"}, {OutputFormat::Csv, "csv"}};

CheckResult check(std::string name, double error, double tol) { return CheckResult{std::move(name), error <= tol, error}; }

std::size_t draw_uniform(std::size_t n, Rng& rng) {
    return std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
}

bool is_random(const ExperimentConfig& config) { return config.subgroup == "random"; }

SubgroupId draw_a_subgroup(FieldPrime p, Rng& rng) {
    const auto q = static_cast<std::size_t>(p.value());
    const auto k = draw_uniform(q * q, rng);
    return SubgroupId::a(static_cast<int>(k / q), static_cast<int>(k % q));
}

SubgroupId fixed_subgroup(const ExperimentConfig& config, FieldPrime p) {
    if (!is_random(config)) return parse_subgroup(config.subgroup, p);
    Rng rng = make_stream(config.seed, kSubgroupStream);
    return draw_a_subgroup(p, rng);
}

std::vector<GroupElement> test_elements(FieldPrime p, int exhaustive_limit) {
    if (p.value() <= exhaustive_limit) return all_elements(p);
    return {GroupElement(p, 1, 0, 0), GroupElement(p, 0, 1, 0), GroupElement(p, 0, 0, 1), GroupElement(p, 1, 1, 1)};
}

CMatrix conjugated_regular(const CMatrix& q, Side side, const GroupElement& g) {
    const auto target = regular_permutation(side, g);
    CMatrix qr(q.rows(), q.cols());
    for (std::size_t k = 0; k < target.size(); ++k) qr.col(static_cast<Index>(k)) = q.col(static_cast<Index>(target[k]));
    return qr * q.adjoint();
}

// -- rep-verify ---------------------------------------------------------------

void rep_verify(const ExperimentConfig& config, Aggregate& agg) {
    const FieldPrime p(config.prime);
    const double tol = config.tolerance;
    const auto irreps = all_irreps(p);
    const auto elements = test_elements(p, 5);
    const auto everything = all_elements(p);

    double unitary = 0.0, composition = 0.0, chars = 0.0;
    Rng rng = make_stream(config.seed, 0);
    for (const auto& mu : irreps) {
        for (const auto& g : everything) {
            const CMatrix d = irrep_matrix(mu, g);
            unitary = std::max(unitary, max_abs_diff(d * d.adjoint(), CMatrix::Identity(d.rows(), d.cols())));
            chars = std::max(chars, std::abs(character(mu, g) - character_closed_form(mu, g)));
        }
        for (int s = 0; s < 50; ++s) {
            const auto& g1 = everything[draw_uniform(everything.size(), rng)];
            const auto& g2 = everything[draw_uniform(everything.size(), rng)];
            const CMatrix lhs = irrep_matrix(mu, inverse(g1)) * irrep_matrix(mu, inverse(g2));
            composition = std::max(composition, max_abs_diff(lhs, irrep_matrix(mu, inverse(multiply(g1, g2)))));
        }
    }
    agg.checks.push_back(check("irrep_unitarity", unitary, tol));
    agg.checks.push_back(check("irrep_composition", composition, tol));
    agg.checks.push_back(check("character_closed_form", chars, tol));

    double schur = 0.0;
    const double order = static_cast<double>(everything.size());
    for (const auto& mu : irreps) {
        for (const auto& nu : irreps) {
            Complex sum = 0.0;
            for (const auto& g : everything) sum += character_closed_form(mu, g) * std::conj(character_closed_form(nu, g));
            schur = std::max(schur, std::abs(sum / order - (mu == nu ? 1.0 : 0.0)));
        }
    }
    agg.checks.push_back(check("schur_orthogonality", schur, tol));

    std::size_t dim_sum = 0;
    for (const auto& mu : irreps) dim_sum += mu.dimension(p) * mu.dimension(p);
    agg.checks.push_back(check("dimension_sum", dim_sum == group_order(p) ? 0.0 : 1.0, 0.0));

    const CMatrix& q = qft_matrix(p).entries();
    agg.checks.push_back(check("qft_unitary", max_abs_diff(q * q.adjoint(), CMatrix::Identity(q.rows(), q.cols())), tol));
    double right = 0.0, left = 0.0;
    for (const auto& g : elements) {
        right = std::max(right, max_abs_diff(conjugated_regular(q, Side::Right, g), regular_rep_fourier_blocks(Side::Right, g)));
        left = std::max(left, max_abs_diff(conjugated_regular(q, Side::Left, g), regular_rep_fourier_blocks(Side::Left, g)));
    }
    agg.checks.push_back(check("qft_block_diagonal_right", right, tol));
    agg.checks.push_back(check("qft_block_diagonal_left", left, tol));

    double projector = 0.0;
    CMatrix total = CMatrix::Zero(q.rows(), q.cols());
    for (const auto& mu : irreps) {
        const CMatrix c = character_projector(mu, p);
        total += c;
        projector = std::max(projector, max_abs_diff(c * c, c));
        const double d = static_cast<double>(mu.dimension(p));
        projector = std::max(projector, std::abs(c.trace() - Complex(d * d)));
    }
    projector = std::max(projector, max_abs_diff(total, CMatrix::Identity(q.rows(), q.cols())));
    agg.checks.push_back(check("character_projectors", projector, tol));
}

// -- state-verify -------------------------------------------------------------

double closed_form_sampling_error(FieldPrime p, const SubgroupId& s, const std::vector<SampledIrrepOutcome>& table) {
    const double cube = static_cast<double>(group_order(p));
    double err = 0.0;
    for (const auto& o : table) {
        double expected = 0.0;
        const double d = static_cast<double>(o.label.dimension(p));
        if (s.kind == SubgroupId::Kind::A) {
            expected = o.label.is_one_dim() ? one_dim_probability_closed_form(p, s.i, o.label.a, o.label.b) : 1.0 / p.value();
        } else if (s.kind == SubgroupId::Kind::Trivial) {
            expected = d * d / cube;
        } else {
            continue;
        }
        err = std::max(err, std::abs(o.probability - expected));
    }
    return err;
}

void state_verify(const ExperimentConfig& config, Aggregate& agg) {
    const FieldPrime p(config.prime);
    const double tol = config.tolerance;
    const double order = static_cast<double>(group_order(p));
    double coset = 0.0, scaling = 0.0, routes = 0.0, closed = 0.0, rho_k = 0.0, invariance = 0.0;
    const auto elements = test_elements(p, 3);
    for (const auto& s : subgroup_catalog(p)) {
        const auto members = subgroup_elements(p, s);
        const DensityMatrix rho = hidden_subgroup_state(p, members);
        coset = std::max(coset, max_abs_diff(rho.entries(), hidden_subgroup_state_regular(p, members).entries()));
        const double ratio = static_cast<double>(members.size()) / order;
        scaling = std::max(scaling, max_abs_diff(rho.entries() * rho.entries(), ratio * rho.entries()));
        for (const auto& g : elements) {
            const auto target = regular_permutation(Side::Left, g);
            invariance = std::max(invariance, max_abs_diff(conjugate_by_permutation(rho.entries(), target), rho.entries()));
        }
        const auto dense = weak_fourier_sample(p, rho);
        const auto block = weak_fourier_sample_block_formula(p, members);
        for (std::size_t k = 0; k < dense.size(); ++k) {
            routes = std::max(routes, std::abs(dense[k].probability - block[k].probability));
            if (dense[k].conditional_state && block[k].conditional_state) {
                routes = std::max(routes, max_abs_diff(dense[k].conditional_state->entries(), block[k].conditional_state->entries()));
            }
            if (s.kind == SubgroupId::Kind::A && !dense[k].label.is_one_dim()) {
                rho_k = std::max(rho_k, max_abs_diff(dense[k].conditional_state->entries(),
                                                     rho_k_closed_form(p, s.i, s.j, dense[k].label.k)));
            }
        }
        closed = std::max(closed, closed_form_sampling_error(p, s, dense));
    }
    agg.checks.push_back(check("coset_equals_regular_sum", coset, tol));
    agg.checks.push_back(check("projector_scaling", scaling, tol));
    agg.checks.push_back(check("left_invariance", invariance, tol));
    agg.checks.push_back(check("sampling_routes_agree", routes, tol));
    agg.checks.push_back(check("sampling_closed_form", closed, tol));
    agg.checks.push_back(check("rho_k_closed_form", rho_k, tol));

    if (p.value() <= 5) {
        double coeff = 0.0, conj = 0.0;
        for (int i = 0; i < p.value(); ++i) {
            const DensityMatrix base = hscp_state(p, SubgroupId::a(i, 0));
            coeff = std::max(coeff, max_abs_diff(base.entries(), hscp_state_from_coefficients(p, SubgroupId::a(i, 0)).entries()));
            for (int j = 1; j < p.value(); ++j) conj = std::max(conj, max_abs_diff(base.entries(), hscp_state(p, SubgroupId::a(i, j)).entries()));
        }
        agg.checks.push_back(check("hscp_coefficient_form", coeff, tol));
        agg.checks.push_back(check("hscp_conjugate_invariance", conj, tol));
    }
}

// -- cg-verify ----------------------------------------------------------------

void cg_verify(const ExperimentConfig& config, Aggregate& agg) {
    const FieldPrime p(config.prime);
    const double tol = config.tolerance;
    const auto irreps = all_irreps(p);
    const auto elements = test_elements(p, 5);
    double unitary = 0.0, identity = 0.0, dims = 0.0, chars = 0.0, branching = 0.0;
    for (const auto& mu1 : irreps) {
        for (const auto& mu2 : irreps) {
            const auto& cg = cg_unitary(p, mu1, mu2);
            const CMatrix& u = cg.unitary.entries();
            unitary = std::max(unitary, max_abs_diff(u * u.adjoint(), CMatrix::Identity(u.rows(), u.cols())));
            std::size_t total = 0;
            for (const auto& seg : cg.segments) total += seg.multiplicity * seg.dimension;
            if (total != mu1.dimension(p) * mu2.dimension(p)) dims = 1.0;

            const auto entries = branch(p, mu1, mu2);
            std::map<std::size_t, std::size_t> from_segments, from_branch;
            for (const auto& seg : cg.segments) from_segments[irrep_position(p, seg.irrep)] += seg.multiplicity;
            for (const auto& e : entries) from_branch[irrep_position(p, e.output)] += e.multiplicity;
            if (from_segments != from_branch) branching = 1.0;

            for (const auto& g : elements) {
                const CMatrix product = kron(irrep_matrix(mu1, g), irrep_matrix(mu2, g));
                identity = std::max(identity, max_abs_diff(u * product * u.adjoint(), cg.block_form(g)));
                Complex sum = 0.0;
                for (const auto& e : entries) sum += static_cast<double>(e.multiplicity) * character_closed_form(e.output, g);
                chars = std::max(chars, std::abs(character_closed_form(mu1, g) * character_closed_form(mu2, g) - sum));
            }
        }
    }
    agg.checks.push_back(check("cg_unitary", unitary, tol));
    agg.checks.push_back(check("cg_block_identity", identity, tol));
    agg.checks.push_back(check("dimension_accounting", dims, 0.0));
    agg.checks.push_back(check("branching_matches_segments", branching, 0.0));
    agg.checks.push_back(check("character_accounting", chars, tol));
}

// -- sample-irreps ------------------------------------------------------------

void sample_irreps(const ExperimentConfig& config, Aggregate& agg) {
    const FieldPrime p(config.prime);
    const SubgroupId s = fixed_subgroup(config, p);
    const auto members = subgroup_elements(p, s);
    if (config.mode == RunMode::Exact) {
        const auto dense = weak_fourier_sample(p, s);
        const auto block = weak_fourier_sample_block_formula(p, members);
        double err = 0.0;
        for (std::size_t k = 0; k < dense.size(); ++k) {
            agg.table.push_back(TableRow{to_string(dense[k].label), dense[k].probability, block[k].probability});
            err = std::max(err, std::abs(dense[k].probability - block[k].probability));
        }
        agg.checks.push_back(check("qft_matches_block_formula", err, config.tolerance));
        if (s.kind == SubgroupId::Kind::A || s.kind == SubgroupId::Kind::Trivial) {
            agg.checks.push_back(check("closed_form", closed_form_sampling_error(p, s, dense), config.tolerance));
        }
        return;
    }
    const PreparedInstance prepared(p, s);
    const auto& weights = prepared.irrep_weights();
    std::vector<std::size_t> counts(weights.size(), 0);
    for (std::size_t t = 0; t < config.trials; ++t) {
        Rng rng = make_stream(config.seed, t);
        ++counts[sample_index(weights, rng)];
    }
    const double n = static_cast<double>(config.trials);
    double chi = 0.0;
    std::size_t categories = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        agg.table.push_back(TableRow{to_string(prepared.weak_sampling()[k].label), static_cast<double>(counts[k]) / n, weights[k]});
        if (weights[k] <= 0.0) {
            if (counts[k] > 0) chi = std::numeric_limits<double>::max();
            continue;
        }
        const double expected = n * weights[k];
        chi += (static_cast<double>(counts[k]) - expected) * (static_cast<double>(counts[k]) - expected) / expected;
        ++categories;
    }
    agg.chi_square = chi;
    agg.chi_square_dof = categories > 0 ? categories - 1 : 0;
    agg.checks.push_back(CheckResult{"chi_square", chi <= chi_square_critical(*agg.chi_square_dof), chi});
}

// -- pipeline runs ------------------------------------------------------------

struct StageRates {
    double good_branch = 0.0;
    double u2 = 0.0;
    double label = 0.0;
    double recover_j = 0.0;
    double verified = 0.0;
};

StageRates stage_rates(const PreparedInstance& prepared, U2Mode mode) {
    const FieldPrime p = prepared.prime();
    if (p.value() <= kMaxExactPrime) {
        const auto b = exact_one_shot(prepared, mode);
        return StageRates{b.good_branch, b.u2_success, b.label_correct, b.recover_j, b.verified};
    }
    // Beyond the dense range, assemble the same product from its closed-form factors.
    const SubgroupId& s = prepared.instance().subgroup();
    const double gate = mode == U2Mode::PaperProbabilistic ? 0.5 : 1.0;
    StageRates r;
    r.good_branch = good_branch_probability(prepared);
    if (s.kind == SubgroupId::Kind::A) {
        r.u2 = gate;
        r.label = label_success_closed_form(p);
        r.recover_j = recover_j_success_probability(prepared, s.i, s.j);
        r.verified = r.good_branch * r.u2 * r.label * r.recover_j;
    } else {
        r.u2 = gate * (p.value() + 1.0) / (2.0 * p.value());
    }
    return r;
}

class InstanceCache {
   public:
    InstanceCache(FieldPrime p, U2Mode mode) : p_(p), mode_(mode) {}
    const PreparedInstance& get(const SubgroupId& s) { return *entry(s).prepared; }
    const StageRates& rates(const SubgroupId& s) {
        Entry& e = entry(s);
        if (!e.rates) e.rates = stage_rates(*e.prepared, mode_);
        return *e.rates;
    }

   private:
    struct Entry {
        std::unique_ptr<PreparedInstance> prepared;
        std::optional<StageRates> rates;
    };

    Entry& entry(const SubgroupId& s) {
        Entry& e = cache_[to_string(s)];
        if (!e.prepared) e.prepared = std::make_unique<PreparedInstance>(p_, s);
        return e;
    }

    FieldPrime p_;
    U2Mode mode_;
    std::map<std::string, Entry> cache_;
};

void check_pipeline_subgroup(const ExperimentConfig& config, FieldPrime p, bool allow_trivial) {
    if (is_random(config)) return;
    const auto s = parse_subgroup(config.subgroup, p);
    if (s.kind == SubgroupId::Kind::A || (allow_trivial && s.kind == SubgroupId::Kind::Trivial)) return;
    throw ConfigInvalid(to_string(config.command) + " needs an A(i,j)" + (allow_trivial ? " or trivial" : "") +
                        " subgroup, got " + config.subgroup);
}

void add_rate_checks(Aggregate& agg, double exact, std::size_t trials) {
    const double n = static_cast<double>(trials);
    agg.exact_rate = exact;
    agg.sigma = std::sqrt(exact * (1.0 - exact) / n);
    const double deviation = std::abs(agg.success_rate - exact);
    agg.checks.push_back(CheckResult{"success_rate_within_3_sigma", deviation <= 3.0 * *agg.sigma, deviation});
}

void exact_pipeline_table(Aggregate& agg, const StageRates& r) {
    agg.branch_rates = {{"good_branch", r.good_branch}, {"u2_success", r.u2}, {"label_correct", r.label},
                        {"recover_j", r.recover_j}, {"verified", r.verified}};
}

void solve(const ExperimentConfig& config, bool conjugacy_only, std::vector<PipelineTrace>& trials, Aggregate& agg) {
    const FieldPrime p(config.prime);
    check_pipeline_subgroup(config, p, !conjugacy_only);
    InstanceCache cache(p, config.u2_mode);

    if (config.mode == RunMode::Exact) {
        const SubgroupId s = fixed_subgroup(config, p);
        const StageRates& r = cache.rates(s);
        exact_pipeline_table(agg, r);
        agg.checks.push_back(check("good_branch_closed_form", std::abs(r.good_branch - good_branch_closed_form(p)), config.tolerance));
        if (s.kind == SubgroupId::Kind::A) {
            const double cf = label_success_closed_form(p);
            const double label_err = s.i != 0 ? std::abs(r.label - cf) : std::max(0.0, cf - r.label);
            agg.checks.push_back(check("label_closed_form", label_err, config.tolerance));
            agg.checks.push_back(check("one_shot_product",
                                       std::abs(r.verified - r.good_branch * r.u2 * r.label * r.recover_j), config.tolerance));
        }
        if (conjugacy_only) {
            agg.exact_rate = r.good_branch * r.u2 * r.label;
            if (p.value() <= 3) {
                const double err = regular_invariance_error(two_copy_hscp_state(p, s), p, Side::Right, 2);
                agg.checks.push_back(check("two_copy_invariance", err, config.tolerance));
            }
        } else {
            agg.exact_rate = r.verified;
            const double fail = 1.0 - r.verified;
            agg.solved_rate = s.kind == SubgroupId::Kind::A ? 1.0 - std::pow(fail, static_cast<double>(config.max_repetitions)) : 1.0;
        }
        return;
    }

    std::size_t good = 0, u2 = 0, label = 0, verified = 0, solved = 0;
    double expected = 0.0;
    std::array<double, 4> expected_outcomes{};  // rejected, u2 failure, unverified, verified
    std::array<std::size_t, 4> outcomes{};
    const SolveConfig solve_config{config.u2_mode, config.max_repetitions, true};
    for (std::size_t t = 0; t < config.trials; ++t) {
        Rng rng = make_stream(config.seed, t);
        const SubgroupId s = is_random(config) ? draw_a_subgroup(p, rng) : parse_subgroup(config.subgroup, p);
        const PreparedInstance& prepared = cache.get(s);
        const StageRates& r = cache.rates(s);

        PipelineTrace trace = run_once(prepared, config.u2_mode, rng);
        good += trace.good_branch;
        u2 += trace.u2_success;
        const bool label_ok = s.kind == SubgroupId::Kind::A && trace.i && *trace.i == s.i;
        label += label_ok;
        verified += trace.verified;

        if (conjugacy_only) {
            expected += r.good_branch * r.u2 * r.label;
        } else {
            expected += r.verified;
            expected_outcomes[0] += 1.0 - r.good_branch;
            expected_outcomes[1] += r.good_branch * (1.0 - r.u2);
            expected_outcomes[2] += r.good_branch * r.u2 - r.verified;
            expected_outcomes[3] += r.verified;
            ++outcomes[!trace.good_branch ? 0 : !trace.u2_success ? 1 : !trace.verified ? 2 : 3];
            Rng solve_rng = make_stream(config.seed, kSolveStreamOffset + t);
            solved += solve_hsp(prepared, solve_config, solve_rng).subgroup == s;
        }
        trials.push_back(std::move(trace));
    }
    const double n = static_cast<double>(config.trials);
    agg.trials = config.trials;
    agg.successes = conjugacy_only ? label : verified;
    agg.success_rate = static_cast<double>(agg.successes) / n;
    agg.branch_rates = {{"good_branch", good / n}, {"u2_success", u2 / n}, {"label_correct", label / n}, {"verified", verified / n}};
    add_rate_checks(agg, expected / n, config.trials);
    if (!conjugacy_only) {
        agg.solved_rate = static_cast<double>(solved) / n;
        double chi = 0.0;
        std::size_t categories = 0;
        for (std::size_t k = 0; k < outcomes.size(); ++k) {
            if (expected_outcomes[k] <= 1e-12) continue;
            const double diff = static_cast<double>(outcomes[k]) - expected_outcomes[k];
            chi += diff * diff / expected_outcomes[k];
            ++categories;
        }
        agg.chi_square = chi;
        agg.chi_square_dof = categories > 0 ? categories - 1 : 0;
        agg.checks.push_back(CheckResult{"outcome_chi_square", chi <= chi_square_critical(*agg.chi_square_dof), chi});
    }
}

// -- pgm-compare --------------------------------------------------------------

void pgm_compare(const ExperimentConfig& config, Aggregate& agg) {
    const FieldPrime p(config.prime);
    const int q = p.value();
    const double tol = config.tolerance;
    double worst = 0.0, closed = 0.0, uniform = 0.0, uw = 0.0, uv = 0.0, z_free = 0.0;
    for (int i = 0; i < q; ++i) {
        for (int k1 = 1; k1 < q; ++k1) {
            for (int k2 = 1; k2 < q; ++k2) {
                if (mod(k1 + k2, q) == 0) continue;
                const double f = compare_to_cg(p, i, k1, k2);
                worst = std::max(worst, 1.0 - f);
                agg.table.push_back(TableRow{"i=" + std::to_string(i) + ",k1=" + std::to_string(k1) + ",k2=" + std::to_string(k2), f, 1.0});
                const auto target = pgm_reduced_closed_form(p, i, k1, k2);
                const auto reductions = pgm_reduce_two_copies(p, i, 0, k1, 0, k2, 0);
                for (const auto& r : reductions) {
                    closed = std::max(closed, 1.0 - fidelity_pure(r.state, target));
                    uniform = std::max(uniform, std::abs(r.probability - 1.0 / q));
                }
                if (q <= 3) {
                    for (int z1 = 0; z1 < q; ++z1) {
                        for (int z2 = 0; z2 < q; ++z2) {
                            const auto other = pgm_reduce_two_copies(p, i, 0, k1, z1, k2, z2);
                            for (std::size_t m = 0; m < other.size(); ++m) {
                                z_free = std::max(z_free, 1.0 - fidelity_pure(other[m].state, reductions[m].state));
                            }
                        }
                    }
                }
            }
        }
    }
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            for (int y1 = 0; y1 < q; ++y1) {
                for (int y2 = 0; y2 < q; ++y2) {
                    const CVector direct = tensor(pgm_y_state(p, i, j, y1), pgm_y_state(p, i, j, y2)).amplitudes();
                    uw = std::max(uw, (two_copy_amplitudes_uw(p, i, j, y1, y2) - direct).cwiseAbs().maxCoeff());
                    const CVector with_z = tensor(pgm_state(p, i, j, y1, 0), pgm_state(p, i, j, y2, 0)).amplitudes();
                    uv = std::max(uv, (two_copy_amplitudes_uv(p, i, j, y1, 0, y2, 0) - with_z).cwiseAbs().maxCoeff());
                }
            }
        }
    }
    agg.checks.push_back(check("cg_fidelity", worst, kFidelityTolerance));
    agg.checks.push_back(check("reduced_closed_form", closed, kFidelityTolerance));
    agg.checks.push_back(check("partner_outcome_uniform", uniform, tol));
    agg.checks.push_back(check("uw_identity", uw, tol));
    agg.checks.push_back(check("uv_identity_at_zero_z", uv, tol));
    if (q <= 3) agg.checks.push_back(check("z_independence", z_free, kFidelityTolerance));
}

// -- exact-dist ---------------------------------------------------------------

void exact_dist(const ExperimentConfig& config, Aggregate& agg) {
    const FieldPrime p(config.prime);
    check_pipeline_subgroup(config, p, false);
    const SubgroupId s = fixed_subgroup(config, p);
    const int q = p.value();
    const double cf = label_success_closed_form(p);
    double entry = 0.0, norm = 0.0;
    for (int k1 = 1; k1 < q; ++k1) {
        for (int k2 = 1; k2 < q; ++k2) {
            if (mod(k1 + k2, q) == 0) continue;
            const auto dist = exact_success_distribution(p, s.i, k1, k2);
            const int a = quadratic_label(p, s.i, k1, k2);
            double sum = 0.0;
            for (int x = 0; x < q; ++x) {
                sum += dist[x];
                std::optional<double> ref;
                if (x == a) ref = cf;
                agg.table.push_back(TableRow{"k1=" + std::to_string(k1) + ",k2=" + std::to_string(k2) + ",x=" + std::to_string(x), dist[x], ref});
            }
            norm = std::max(norm, std::abs(sum - 1.0));
            entry = std::max(entry, s.i != 0 ? std::abs(dist[a] - cf) : std::max(0.0, cf - dist[a]));
        }
    }
    agg.checks.push_back(check("entry_at_label", entry, config.tolerance));
    agg.checks.push_back(check("normalization", norm, config.tolerance));
}

// -- serialization ------------------------------------------------------------

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
Json optional_json(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

Json to_json(const ExperimentConfig& c) {
    return Json{{"command", to_string(c.command)},
                {"prime", c.prime},
                {"subgroup", c.subgroup},
                {"trials", c.trials},
                {"mode", to_string(c.mode)},
                {"u2_mode", to_string(c.u2_mode)},
                {"seed", c.seed},
                {"format", to_string(c.format)},
                {"output", c.output},
                {"max_repetitions", c.max_repetitions},
                {"tolerance", c.tolerance}};
}

Json to_json(const PipelineTrace& t) {
    return Json{{"k1", t.k1}, {"k2", t.k2},           {"m", t.m}, {"u2_success", t.u2_success},
                {"x", t.x},   {"i", optional_json(t.i)}, {"j", optional_json(t.j)}, {"verified", t.verified}};
}

Json to_json(const Aggregate& a) {
    Json checks = Json::array();
    for (const auto& c : a.checks) checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"max_error", c.max_error}});
    Json table = Json::array();
    for (const auto& r : a.table) table.push_back(Json{{"label", r.label}, {"value", r.value}, {"reference", optional_json(r.reference)}});
    Json rates = Json::object();
    for (const auto& [k, v] : a.branch_rates) rates[k] = v;
    return Json{{"trials", a.trials},
                {"successes", a.successes},
                {"success_rate", a.success_rate},
                {"branch_rates", rates},
                {"exact_rate", optional_json(a.exact_rate)},
                {"sigma", optional_json(a.sigma)},
                {"chi_square", optional_json(a.chi_square)},
                {"chi_square_dof", a.chi_square_dof ? Json(*a.chi_square_dof) : Json(nullptr)},
                {"solved_rate", optional_json(a.solved_rate)},
                {"checks", checks},
                {"table", table},
                {"passed", a.passed},
                {"wall_time", a.wall_time}};
}

template <typename T>
std::optional<T> optional_from(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

ExperimentConfig config_from_json(const Json& j) {
    ExperimentConfig c;
    c.command = parse_command(j.at("command").get<std::string>());
    c.prime = j.at("prime").get<int>();
    c.subgroup = j.at("subgroup").get<std::string>();
    c.trials = j.at("trials").get<std::size_t>();
    c.mode = parse_run_mode(j.at("mode").get<std::string>());
    c.u2_mode = parse_u2_mode(j.at("u2_mode").get<std::string>());
    c.seed = j.at("seed").get<std::uint64_t>();
    c.format = parse_output_format(j.at("format").get<std::string>());
    c.output = j.at("output").get<std::string>();
    c.max_repetitions = j.at("max_repetitions").get<std::size_t>();
    c.tolerance = j.at("tolerance").get<double>();
    return c;
}

PipelineTrace trace_from_json(const Json& j) {
    PipelineTrace t;
    t.k1 = j.at("k1").get<int>();
    t.k2 = j.at("k2").get<int>();
    t.m = j.at("m").get<int>();
    t.u2_success = j.at("u2_success").get<bool>();
    t.x = j.at("x").get<int>();
    t.i = optional_from<int>(j.at("i"));
    t.j = optional_from<int>(j.at("j"));
    t.verified = j.at("verified").get<bool>();
    t.good_branch = t.m >= 0;
    return t;
}

Aggregate aggregate_from_json(const Json& j) {
    Aggregate a;
    a.trials = j.at("trials").get<std::size_t>();
    a.successes = j.at("successes").get<std::size_t>();
    a.success_rate = j.at("success_rate").get<double>();
    for (const auto& [k, v] : j.at("branch_rates").items()) a.branch_rates[k] = v.get<double>();
    a.exact_rate = optional_from<double>(j.at("exact_rate"));
    a.sigma = optional_from<double>(j.at("sigma"));
    a.chi_square = optional_from<double>(j.at("chi_square"));
    a.chi_square_dof = optional_from<std::size_t>(j.at("chi_square_dof"));
    a.solved_rate = optional_from<double>(j.at("solved_rate"));
    for (const auto& c : j.at("checks")) {
        a.checks.push_back(CheckResult{c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.at("max_error").get<double>()});
    }
    for (const auto& r : j.at("table")) {
        a.table.push_back(TableRow{r.at("label").get<std::string>(), r.at("value").get<double>(), optional_from<double>(r.at("reference"))});
    }
    a.passed = j.at("passed").get<bool>();
    a.wall_time = j.at("wall_time").get<double>();
    return a;
}

std::string csv_optional(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

std::string csv_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quoted(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string to_string(Command c) { return name_of(kCommands, c); }
std::string to_string(RunMode m) { return name_of(kModes, m); }
std::string to_string(OutputFormat f) { return name_of(kFormats, f); }
Command parse_command(std::string_view text) { return value_of(kCommands, text, "command"); }
RunMode parse_run_mode(std::string_view text) { return value_of(kModes, text, "mode"); }
OutputFormat parse_output_format(std::string_view text) { return value_of(kFormats, text, "format"); }

void validate(const ExperimentConfig& config) {
    if (!is_prime(config.prime) || config.prime == 2) {
        throw ConfigInvalid("prime must be an odd prime, got " + std::to_string(config.prime));
    }
    if (config.prime > kMaxMonteCarloPrime) {
        throw ConfigInvalid("prime must be at most " + std::to_string(kMaxMonteCarloPrime));
    }
    const bool dense = config.mode == RunMode::Exact || config.command == Command::RepVerify ||
                       config.command == Command::StateVerify || config.command == Command::CgVerify ||
                       config.command == Command::PgmCompare || config.command == Command::ExactDist;
    if (dense && config.prime > kMaxExactPrime) {
        throw ConfigInvalid(to_string(config.command) + " in this mode needs prime at most " + std::to_string(kMaxExactPrime));
    }
    if (config.mode == RunMode::MonteCarlo && config.trials == 0 &&
        (config.command == Command::SolveHsp || config.command == Command::SolveHscp || config.command == Command::SampleIrreps)) {
        throw ConfigInvalid("trials must be positive");
    }
    if (!(config.tolerance > 0.0)) throw ConfigInvalid("tolerance must be positive");
    if (!is_random(config)) {
        try {
            parse_subgroup(config.subgroup, FieldPrime(config.prime));
        } catch (const ParseError& e) {
            throw ConfigInvalid(e.what());
        }
    }
}

ExperimentReport run(const ExperimentConfig& config) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport report{config, {}, {}};
    auto& agg = report.aggregate;
    switch (config.command) {
        case Command::RepVerify: rep_verify(config, agg); break;
        case Command::StateVerify: state_verify(config, agg); break;
        case Command::CgVerify: cg_verify(config, agg); break;
        case Command::SampleIrreps: sample_irreps(config, agg); break;
        case Command::SolveHscp: solve(config, true, report.trials, agg); break;
        case Command::SolveHsp: solve(config, false, report.trials, agg); break;
        case Command::PgmCompare: pgm_compare(config, agg); break;
        case Command::ExactDist: exact_dist(config, agg); break;
    }
    agg.passed = std::all_of(agg.checks.begin(), agg.checks.end(), [](const CheckResult& c) { return c.passed; });
    agg.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string emit(const ExperimentReport& report, OutputFormat format) {
    if (format == OutputFormat::Csv && report.trials.empty() && !report.aggregate.table.empty()) {
        std::ostringstream out;
        out << "label,value,reference\n";
        for (const auto& row : report.aggregate.table) {
            out << csv_quoted(row.label) << ',' << csv_number(row.value) << ','
                << (row.reference ? csv_number(*row.reference) : std::string()) << '\n';
        }
        return out.str();
    }
    if (format == OutputFormat::Csv) {
        std::ostringstream out;
        out << "trial,k1,k2,m,u2_success,x,i,j,verified\n";
        for (std::size_t t = 0; t < report.trials.size(); ++t) {
            const auto& r = report.trials[t];
            out << t << ',' << r.k1 << ',' << r.k2 << ',' << r.m << ',' << (r.u2_success ? "true" : "false") << ',' << r.x
                << ',' << csv_optional(r.i) << ',' << csv_optional(r.j) << ',' << (r.verified ? "true" : "false") << '\n';
        }
        return out.str();
    }
    Json trials = Json::array();
    for (const auto& t : report.trials) trials.push_back(to_json(t));
    const Json doc{{"config", to_json(report.config)}, {"trials", trials}, {"aggregate", to_json(report.aggregate)}};
    return doc.dump(2) + "\n";
}

ExperimentReport parse_report(std::string_view json) {
    try {
        const Json doc = Json::parse(json);
        ExperimentReport report{config_from_json(doc.at("config")), {}, aggregate_from_json(doc.at("aggregate"))};
        for (const auto& t : doc.at("trials")) report.trials.push_back(trace_from_json(t));
        return report;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("report: ") + e.what());
    } catch (const ConfigInvalid& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
}

void write_report(const ExperimentReport& report) {
    const std::string text = emit(report, report.config.format);
    if (report.config.output.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoFailure("failed to write report to standard output");
        return;
    }
    std::ofstream out(report.config.output, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open '" + report.config.output + "' for writing");
    out << text;
    out.close();
    if (!out) throw IoFailure("failed writing '" + report.config.output + "'");
}

int exit_code(const ExperimentReport& report) { return report.aggregate.passed ? 0 : 1; }

double chi_square_critical(std::size_t dof) {
    if (dof == 0) return 0.0;
    constexpr double z = 3.090232306167813;  // standard normal 99.9% point
    const double k = static_cast<double>(dof);
    const double h = 2.0 / (9.0 * k);
    return k * std::pow(1.0 - h + z * std::sqrt(h), 3);
}

}  // namespace heis
