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

#include "heis/hscp_pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "heis/clebsch_gordan.hpp"
#include "heis/errors.hpp"

namespace heis {

namespace {

using Index = Eigen::Index;

constexpr int kDenseSamplingLimit = 5;

CMatrix inverse_fourier(FieldPrime p) {
    const int q = p.value();
    const RootsOfUnity omega(p);
    const double norm = 1.0 / std::sqrt(static_cast<double>(q));
    CMatrix f(q, q);
    for (int x = 0; x < q; ++x) {
        for (int t = 0; t < q; ++t) f(x, t) = norm * omega(-static_cast<std::int64_t>(x) * t);
    }
    return f;
}

std::vector<double> real_diagonal(const CMatrix& m) {
    std::vector<double> out(static_cast<std::size_t>(m.rows()));
    for (Index k = 0; k < m.rows(); ++k) out[static_cast<std::size_t>(k)] = std::max(0.0, m(k, k).real());
    return out;
}

/// Probability that recover_j returns j given the per-sample distribution.
double line_probability(const std::vector<double>& dist, int q, int j, std::size_t samples) {
    double on_line = 0.0;
    for (int beta = 0; beta < q; ++beta) on_line += dist[static_cast<std::size_t>(mod(-static_cast<std::int64_t>(beta) * j, q)) * q + beta];
    const double n = static_cast<double>(samples);
    return std::max(0.0, std::pow(on_line, n) - std::pow(dist[0], n));
}

}  // namespace

std::string to_string(U2Mode mode) { return mode == U2Mode::ExactIsometry ? "exact" : "probabilistic"; }

U2Mode parse_u2_mode(std::string_view text) {
    if (text == "exact") return U2Mode::ExactIsometry;
    if (text == "probabilistic") return U2Mode::PaperProbabilistic;
    throw ParseError("unknown U2 mode '" + std::string(text) + "'");
}

PreparedInstance::PreparedInstance(HiddenSubgroupInstance instance) : instance_(std::move(instance)) {
    const FieldPrime p = instance_.prime();
    sampling_ = p.value() <= kDenseSamplingLimit ? weak_fourier_sample(p, instance_.subgroup())
                                                 : weak_fourier_sample_block_formula(p, instance_.elements());
    weights_.reserve(sampling_.size());
    for (const auto& o : sampling_) weights_.push_back(o.probability);
}

const std::vector<double>& PreparedInstance::character_distribution(int i) const {
    const FieldPrime p = prime();
    const int q = p.value();
    i = mod(i, q);
    std::lock_guard lock(mutex_);
    auto it = characters_.find(i);
    if (it != characters_.end()) return it->second;

    std::map<std::size_t, std::vector<std::pair<int, int>>> level_sets;
    const std::int64_t half = inv_mod(2, q);
    for (std::int64_t l = 0; l < q; ++l) {
        for (std::int64_t y = 0; y < q; ++y) {
            const GroupElement g(p, l, half * l % q * (l - 1 + q) % q * i + y, l * i);
            level_sets[instance_.query(g)].emplace_back(static_cast<int>(l), static_cast<int>(y));
        }
    }
    const RootsOfUnity omega(p);
    std::vector<double> dist(static_cast<std::size_t>(q) * q, 0.0);
    const double scale = 1.0 / std::pow(static_cast<double>(q), 4);
    for (int alpha = 0; alpha < q; ++alpha) {
        for (int beta = 0; beta < q; ++beta) {
            double total = 0.0;
            for (const auto& [label, points] : level_sets) {
                Complex sum = 0.0;
                for (const auto& [l, y] : points) sum += omega(static_cast<std::int64_t>(alpha) * l + static_cast<std::int64_t>(beta) * y);
                total += std::norm(sum);
            }
            dist[static_cast<std::size_t>(alpha) * q + beta] = total * scale;
        }
    }
    return characters_.emplace(i, std::move(dist)).first->second;
}

std::vector<GoodBranch> good_branches(const PreparedInstance& prepared) {
    const int q = prepared.prime().value();
    const auto& table = prepared.weak_sampling();
    std::vector<GoodBranch> out;
    for (const auto& o1 : table) {
        if (o1.label.is_one_dim() || !o1.conditional_state) continue;
        for (const auto& o2 : table) {
            if (o2.label.is_one_dim() || !o2.conditional_state || mod(o1.label.k + o2.label.k, q) == 0) continue;
            out.push_back(GoodBranch{o1.label.k, o2.label.k, o1.probability * o2.probability, *o1.conditional_state,
                                     *o2.conditional_state});
        }
    }
    return out;
}

double good_branch_probability(const PreparedInstance& prepared) {
    const int q = prepared.prime().value();
    const auto& table = prepared.weak_sampling();
    double total = 0.0;
    for (const auto& o1 : table) {
        if (o1.label.is_one_dim()) continue;
        for (const auto& o2 : table) {
            if (!o2.label.is_one_dim() && mod(o1.label.k + o2.label.k, q) != 0) total += o1.probability * o2.probability;
        }
    }
    return total;
}

double good_branch_closed_form(FieldPrime p) {
    const double q = p.value();
    return (q - 1) * (q - 2) / (q * q);
}

BranchOutcome sample_good_branch(const PreparedInstance& prepared, Rng& rng) {
    const int q = prepared.prime().value();
    const auto& table = prepared.weak_sampling();
    const auto& o1 = table[sample_index(prepared.irrep_weights(), rng)];
    const auto& o2 = table[sample_index(prepared.irrep_weights(), rng)];
    if (o1.label.is_one_dim() || o2.label.is_one_dim() || mod(o1.label.k + o2.label.k, q) == 0) {
        return RejectedBranch{o1.label, o2.label};
    }
    return GoodBranch{o1.label.k, o2.label.k, o1.probability * o2.probability, *o1.conditional_state,
                      *o2.conditional_state};
}

namespace {

const CgDecomposition& partner_cg(FieldPrime p, int k1, int k2) {
    const int q = p.value();
    if (mod(k1 + k2, q) == 0 || mod(k1, q) == 0 || mod(k2, q) == 0) {
        throw InvalidLabel("partner measurement needs k1, k2, k1 + k2 nonzero");
    }
    return cg_unitary(p, IrrepLabel::p_dim(k1), IrrepLabel::p_dim(k2));
}

/// Reads the partner block of the monomial W straight from the input: output index
/// u * p + m comes from input src[u * p + m].
template <typename Entry>
class PartnerReader {
   public:
    PartnerReader(FieldPrime p, const CgDecomposition& cg, Entry entry)
        : q_(p.value()), phase_(cg.monomial_phase), src_(cg.monomial_target->size()), entry_(std::move(entry)) {
        const auto& target = *cg.monomial_target;
        for (std::size_t r = 0; r < target.size(); ++r) src_[target[r]] = r;
    }

    double probability(int m) const {
        double total = 0.0;
        for (int u = 0; u < q_; ++u) {
            const auto r = source(u, m);
            total += entry_(r, r).real();
        }
        return std::max(0.0, total);
    }

    PartnerOutcome outcome(int m, double probability) const {
        CMatrix reduced(q_, q_);
        for (int u = 0; u < q_; ++u) {
            const auto r = source(u, m);
            for (int w = 0; w < q_; ++w) {
                const auto c = source(w, m);
                reduced(u, w) = phase_[r] * entry_(r, c) * std::conj(phase_[c]);
            }
        }
        DensityMatrix state = DensityMatrix::normalized(std::move(reduced), RegisterLayout::single(static_cast<std::size_t>(q_)));
        auto pure = state.as_pure();
        return PartnerOutcome{m, probability, std::move(state), std::move(pure)};
    }

    std::vector<PartnerOutcome> all() const {
        std::vector<PartnerOutcome> out;
        for (int m = 0; m < q_; ++m) {
            const double prob = probability(m);
            if (prob > 1e-14) out.push_back(outcome(m, prob));
        }
        return out;
    }

    PartnerOutcome sample(Rng& rng) const {
        std::vector<double> dist(static_cast<std::size_t>(q_));
        for (int m = 0; m < q_; ++m) dist[static_cast<std::size_t>(m)] = probability(m);
        const int m = static_cast<int>(sample_index(dist, rng));
        return outcome(m, dist[static_cast<std::size_t>(m)]);
    }

   private:
    std::size_t source(int u, int m) const { return src_[static_cast<std::size_t>(u) * q_ + m]; }

    int q_;
    const std::vector<Complex>& phase_;
    std::vector<std::size_t> src_;
    Entry entry_;
};

auto joint_reader(FieldPrime p, int k1, int k2, const DensityMatrix& joint) {
    if (joint.layout() != RegisterLayout({static_cast<std::size_t>(p.value()), static_cast<std::size_t>(p.value())})) {
        throw LayoutMismatch("partner measurement: joint state must live on {p, p}");
    }
    const CMatrix& m = joint.entries();
    auto entry = [&m](std::size_t r, std::size_t c) { return m(static_cast<Index>(r), static_cast<Index>(c)); };
    return PartnerReader(p, partner_cg(p, k1, k2), entry);
}

auto product_reader(FieldPrime p, int k1, int k2, const DensityMatrix& first, const DensityMatrix& second) {
    const auto q = static_cast<std::size_t>(p.value());
    if (first.dimension() != q || second.dimension() != q) {
        throw LayoutMismatch("partner measurement: factors must have dimension p");
    }
    const CMatrix& a = first.entries();
    const CMatrix& b = second.entries();
    auto entry = [&a, &b, q](std::size_t r, std::size_t c) {
        return a(static_cast<Index>(r / q), static_cast<Index>(c / q)) * b(static_cast<Index>(r % q), static_cast<Index>(c % q));
    };
    return PartnerReader(p, partner_cg(p, k1, k2), entry);
}

}  // namespace

std::vector<PartnerOutcome> cg_and_measure_partner(FieldPrime p, int k1, int k2, const DensityMatrix& joint) {
    return joint_reader(p, k1, k2, joint).all();
}

PartnerOutcome cg_and_measure_partner(FieldPrime p, int k1, int k2, const DensityMatrix& joint, Rng& rng) {
    return joint_reader(p, k1, k2, joint).sample(rng);
}

std::vector<PartnerOutcome> cg_and_measure_partner(FieldPrime p, int k1, int k2, const DensityMatrix& first,
                                                   const DensityMatrix& second) {
    return product_reader(p, k1, k2, first, second).all();
}

PartnerOutcome cg_and_measure_partner(FieldPrime p, int k1, int k2, const DensityMatrix& first,
                                      const DensityMatrix& second, Rng& rng) {
    return product_reader(p, k1, k2, first, second).sample(rng);
}

int quadratic_label(FieldPrime p, int i, int k1, int k2) {
    const int q = p.value();
    const std::int64_t num = static_cast<std::int64_t>(mod(i, q)) * mod(k1, q) % q * mod(k2, q) % q;
    return mod(num * inv_mod(2 * static_cast<std::int64_t>(mod(k1 + k2, q)), q), q);
}

StateVector cg_output_closed_form(FieldPrime p, int i, int k1, int k2) {
    const int q = p.value();
    const std::int64_t a = quadratic_label(p, i, k1, k2);
    const RootsOfUnity omega(p);
    CVector v(q);
    for (std::int64_t s = 0; s < q; ++s) v(s) = omega(a * s * s) / std::sqrt(static_cast<double>(q));
    return StateVector(std::move(v), RegisterLayout::single(static_cast<std::size_t>(q)));
}

CMatrix u2_kraus(FieldPrime p) {
    const int q = p.value();
    CMatrix k = CMatrix::Zero(q, q);
    k(0, 0) = 1.0;
    const double h = 1.0 / std::sqrt(2.0);
    for (int r = 1; r <= (q - 1) / 2; ++r) {
        const int t = mod(static_cast<std::int64_t>(r) * r, q);
        k(t, r) = h;
        k(t, q - r) = h;
    }
    return k;
}

double antisymmetric_weight(const StateVector& psi) {
    const auto q = static_cast<Index>(psi.dimension());
    double sum = 0.0;
    for (Index s = 0; s < q; ++s) sum += std::norm(psi.amplitudes()(s) - psi.amplitudes()((q - s) % q)) / 4.0;
    return std::sqrt(sum);
}

StateVector u2_transform(const StateVector& psi, double tol) {
    if (psi.layout().size() != 1) throw LayoutMismatch("u2_transform: expects a single register");
    const FieldPrime p(static_cast<int>(psi.dimension()));
    if (antisymmetric_weight(psi) > tol) throw AsymmetricInput("u2_transform: input is not symmetric under s -> -s");
    return StateVector::normalized(u2_kraus(p) * psi.amplitudes(), psi.layout());
}

std::optional<StateVector> u2_transform(const StateVector& psi, U2Mode mode, Rng& rng, double tol) {
    StateVector out = u2_transform(psi, tol);
    if (mode == U2Mode::PaperProbabilistic && !bernoulli(rng, 0.5)) return std::nullopt;
    return out;
}

U2Result u2_transform_mixed(const DensityMatrix& rho, U2Mode mode) {
    if (rho.layout().size() != 1) throw LayoutMismatch("u2_transform_mixed: expects a single register");
    const FieldPrime p(static_cast<int>(rho.dimension()));
    const CMatrix k = u2_kraus(p);
    const CMatrix kept = k * rho.entries() * k.adjoint();
    double weight = kept.trace().real();
    if (mode == U2Mode::PaperProbabilistic) weight *= 0.5;
    if (weight <= 1e-14) return U2Result{false, 0.0, std::nullopt};
    return U2Result{true, weight, DensityMatrix::normalized(kept, rho.layout())};
}

U2Result u2_transform_mixed(const DensityMatrix& rho, U2Mode mode, Rng& rng) {
    U2Result exact = u2_transform_mixed(rho, mode);
    if (!exact.success || !bernoulli(rng, exact.success_probability)) {
        return U2Result{false, exact.success_probability, std::nullopt};
    }
    return exact;
}

std::vector<double> label_distribution(const DensityMatrix& post_u2) {
    const FieldPrime p(static_cast<int>(post_u2.dimension()));
    const CMatrix f = inverse_fourier(p);
    return real_diagonal(f * post_u2.entries() * f.adjoint());
}

std::vector<double> label_distribution(const StateVector& post_u2) {
    const FieldPrime p(static_cast<int>(post_u2.dimension()));
    const CVector v = inverse_fourier(p) * post_u2.amplitudes();
    std::vector<double> out(static_cast<std::size_t>(v.size()));
    for (Index x = 0; x < v.size(); ++x) out[static_cast<std::size_t>(x)] = std::norm(v(x));
    return out;
}

int extract_label(const DensityMatrix& post_u2, Rng& rng) {
    return static_cast<int>(sample_index(label_distribution(post_u2), rng));
}

int recover_i_from_label(FieldPrime p, int x, int k1, int k2) {
    const int q = p.value();
    const std::int64_t num = static_cast<std::int64_t>(mod(x, q)) * 2 % q * mod(k1 + k2, q) % q;
    return mod(num * inv_mod(static_cast<std::int64_t>(mod(k1, q)) * mod(k2, q), q), q);
}

double label_success_closed_form(FieldPrime p) {
    const double r = 1.0 / std::sqrt(2.0);
    const double amp = r + (1.0 - r) / p.value();
    return amp * amp;
}

std::vector<double> exact_success_distribution(FieldPrime p, int i, int k1, int k2) {
    const auto layout = RegisterLayout::single(static_cast<std::size_t>(p.value()));
    const DensityMatrix joint = tensor(DensityMatrix::normalized(rho_k_closed_form(p, i, 0, k1), layout),
                                       DensityMatrix::normalized(rho_k_closed_form(p, i, 0, k2), layout));
    std::vector<double> total(static_cast<std::size_t>(p.value()), 0.0);
    double mass = 0.0;
    for (const auto& partner : cg_and_measure_partner(p, k1, k2, joint)) {
        const U2Result u2 = u2_transform_mixed(partner.state, U2Mode::ExactIsometry);
        if (!u2.success) continue;
        const double w = partner.probability * u2.success_probability;
        const auto dist = label_distribution(*u2.state);
        for (std::size_t x = 0; x < dist.size(); ++x) total[x] += w * dist[x];
        mass += w;
    }
    for (auto& v : total) v /= mass;
    return total;
}

std::size_t recover_j_sample_count(FieldPrime p) {
    const auto bits = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(p.value()))));
    return 3 * bits + 5;
}

int recover_j(const PreparedInstance& prepared, int i, Rng& rng) {
    const int q = prepared.prime().value();
    const auto& dist = prepared.character_distribution(i);
    const std::size_t n = recover_j_sample_count(prepared.prime());
    std::vector<std::pair<int, int>> samples;
    samples.reserve(n);
    std::optional<int> j;
    for (std::size_t s = 0; s < n; ++s) {
        const auto idx = sample_index(dist, rng);
        const int alpha = static_cast<int>(idx) / q, beta = static_cast<int>(idx) % q;
        samples.emplace_back(alpha, beta);
        if (!j && beta != 0) j = mod(-static_cast<std::int64_t>(alpha) * inv_mod(beta, q), q);
    }
    if (!j) throw InconsistentSamples("recover_j: no sample determines j");
    for (const auto& [alpha, beta] : samples) {
        if (mod(alpha + static_cast<std::int64_t>(beta) * *j, q) != 0) {
            throw InconsistentSamples("recover_j: sampled characters admit no common j");
        }
    }
    return *j;
}

double recover_j_success_probability(const PreparedInstance& prepared, int i, int expected_j) {
    const int q = prepared.prime().value();
    return line_probability(prepared.character_distribution(i), q, mod(expected_j, q),
                            recover_j_sample_count(prepared.prime()));
}

bool verify_candidate(const HiddenSubgroupInstance& instance, int i, int j) {
    const FieldPrime p = instance.prime();
    return instance.query(GroupElement::identity(p)) == instance.query(GroupElement(p, 1, j, i));
}

PipelineTrace run_once(const PreparedInstance& prepared, U2Mode mode, Rng& rng) {
    const FieldPrime p = prepared.prime();
    PipelineTrace trace;
    const BranchOutcome branch = sample_good_branch(prepared, rng);
    if (const auto* rejected = std::get_if<RejectedBranch>(&branch)) {
        trace.k1 = rejected->mu1.k;
        trace.k2 = rejected->mu2.k;
        return trace;
    }
    const auto& good = std::get<GoodBranch>(branch);
    trace.good_branch = true;
    trace.k1 = good.k1;
    trace.k2 = good.k2;

    const PartnerOutcome partner = cg_and_measure_partner(p, good.k1, good.k2, good.first, good.second, rng);
    trace.m = partner.m;
    const U2Result u2 = u2_transform_mixed(partner.state, mode, rng);
    trace.u2_success = u2.success;
    if (!u2.success) return trace;

    trace.x = extract_label(*u2.state, rng);
    const int i = recover_i_from_label(p, trace.x, good.k1, good.k2);
    trace.i = i;
    try {
        trace.j = recover_j(prepared, i, rng);
    } catch (const InconsistentSamples&) {
        return trace;
    }
    trace.verified = verify_candidate(prepared.instance(), i, *trace.j);
    return trace;
}

SolveResult solve_hsp(const PreparedInstance& prepared, const SolveConfig& config, Rng& rng) {
    SolveResult result{SubgroupId::trivial(), {}};
    for (std::size_t r = 0; r < config.max_repetitions; ++r) {
        result.traces.push_back(run_once(prepared, config.u2_mode, rng));
        const auto& t = result.traces.back();
        if (t.verified) {
            result.subgroup = SubgroupId::a(*t.i, *t.j);
            return result;
        }
    }
    if (!config.trivial_on_exhaustion) {
        throw RepetitionBudgetExhausted("no candidate verified within " + std::to_string(config.max_repetitions) +
                                        " repetitions");
    }
    return result;
}

OneShotBreakdown exact_one_shot(const PreparedInstance& prepared, U2Mode mode) {
    const FieldPrime p = prepared.prime();
    const int q = p.value();
    const SubgroupId& s = prepared.instance().subgroup();
    const bool labelled = s.kind == SubgroupId::Kind::A;
    const std::size_t n = recover_j_sample_count(p);

    // P(recover_j returns j' and the candidate verifies), per candidate i.
    std::vector<double> verify_rate(static_cast<std::size_t>(q), 0.0);
    for (int i = 0; i < q; ++i) {
        const auto& dist = prepared.character_distribution(i);
        for (int j = 0; j < q; ++j) {
            if (verify_candidate(prepared.instance(), i, j)) verify_rate[i] += line_probability(dist, q, j, n);
        }
    }

    OneShotBreakdown out;
    double u2_mass = 0.0, label_mass = 0.0;
    for (const auto& branch : good_branches(prepared)) {
        out.good_branch += branch.probability;
        for (const auto& partner : cg_and_measure_partner(p, branch.k1, branch.k2, branch.first, branch.second)) {
            const U2Result u2 = u2_transform_mixed(partner.state, mode);
            const double w = branch.probability * partner.probability * u2.success_probability;
            u2_mass += w;
            if (!u2.success) continue;
            const auto dist = label_distribution(*u2.state);
            for (int x = 0; x < q; ++x) out.verified += w * dist[x] * verify_rate[recover_i_from_label(p, x, branch.k1, branch.k2)];
            if (labelled) label_mass += w * dist[quadratic_label(p, s.i, branch.k1, branch.k2)];
        }
    }
    if (out.good_branch > 0.0) out.u2_success = u2_mass / out.good_branch;
    if (u2_mass > 0.0) out.label_correct = label_mass / u2_mass;
    if (labelled) out.recover_j = recover_j_success_probability(prepared, s.i, s.j);
    return out;
}

}  // namespace heis
