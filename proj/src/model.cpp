#include "segrisk/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "segrisk/logmath.hpp"
#include "segrisk/rng.hpp"

namespace segrisk {

namespace {

constexpr double kSumTol = 1e-12;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

BoolMatrix pattern(const Matrix& m) {
    BoolMatrix b(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) b(i, j) = m(i, j) > 0.0;
    return b;
}

BoolMatrix bool_product(const BoolMatrix& a, const BoolMatrix& b) {
    BoolMatrix c = BoolMatrix::Constant(a.rows(), b.cols(), false);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k) {
            if (!a(i, k)) continue;
            for (Eigen::Index j = 0; j < b.cols(); ++j) c(i, j) = c(i, j) || b(k, j);
        }
    return c;
}

}  // namespace

std::size_t length(const Observations& x) {
    return std::visit([](const auto& v) { return v.size(); }, x);
}

Observations prefix(const Observations& x, std::size_t len) {
    return std::visit(
        [len](const auto& v) -> Observations {
            using V = std::decay_t<decltype(v)>;
            if (len > v.size()) throw std::out_of_range("prefix longer than sequence");
            return V(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(len));
        },
        x);
}

int HmmModel::alphabet_size() const {
    if (const auto* cat = std::get_if<CategoricalEmission>(&emission))
        return static_cast<int>(cat->probs.cols());
    return 0;
}

double HmmModel::log_emission(State s, int symbol) const {
    const auto& cat = std::get<CategoricalEmission>(emission);
    if (symbol < 0 || symbol >= cat.probs.cols()) return kNegInf;
    return safe_log(cat.probs(s, symbol));
}

double HmmModel::log_emission(State s, double value) const {
    const auto& g = std::get<GaussianEmission>(emission);
    double sd = g.stds[s];
    double z = (value - g.means[s]) / sd;
    return -0.5 * std::log(2.0 * std::numbers::pi * sd * sd) - 0.5 * z * z;
}

double HmmModel::log_initial(State s) const { return safe_log(initial[s]); }

double HmmModel::log_transition(State from, State to) const {
    return safe_log(transition(from, to));
}

LossMatrix LossMatrix::symmetric(int num_states) {
    LossMatrix loss;
    loss.l = Matrix::Ones(num_states, num_states);
    loss.l.diagonal().setZero();
    return loss;
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diags) {
    std::string out = "invalid model:";
    for (const auto& d : diags) out += " [" + d.code + "] " + d.message + ";";
    return out;
}

}  // namespace

ModelValidationError::ModelValidationError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

bool is_irreducible(const Matrix& transition) {
    const Eigen::Index m = transition.rows();
    BoolMatrix reach = pattern(transition);
    for (Eigen::Index i = 0; i < m; ++i) reach(i, i) = true;
    // Warshall closure.
    for (Eigen::Index k = 0; k < m; ++k)
        for (Eigen::Index i = 0; i < m; ++i)
            if (reach(i, k))
                for (Eigen::Index j = 0; j < m; ++j) reach(i, j) = reach(i, j) || reach(k, j);
    return reach.all();
}

int primitivity_index(const Matrix& m) {
    const Eigen::Index size = m.rows();
    if (size == 0) return 0;
    const Eigen::Index bound = (size - 1) * (size - 1) + 1;
    BoolMatrix base = pattern(m);
    BoolMatrix power = base;
    for (Eigen::Index r = 1; r <= bound; ++r) {
        if (power.all()) return static_cast<int>(r);
        power = bool_product(power, base);
    }
    return 0;
}

bool is_primitive(const Matrix& transition) { return primitivity_index(transition) > 0; }

std::vector<Diagnostic> validate_model(const HmmModel& model) {
    std::vector<Diagnostic> diags;
    const auto& p = model.transition;
    const Eigen::Index m = p.rows();
    if (m < 2 || p.cols() != m) {
        diags.push_back({"shape", "transition must be square with at least 2 states, got " +
                                      std::to_string(p.rows()) + "x" + std::to_string(p.cols())});
        return diags;
    }

    bool stochastic = true;
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            if (!std::isfinite(p(i, j)) || p(i, j) < 0.0) {
                diags.push_back({"negative_entry", "transition(" + std::to_string(i) + "," +
                                                       std::to_string(j) + ") = " + fmt(p(i, j))});
                stochastic = false;
            }
        }
        double sum = p.row(i).sum();
        if (std::abs(sum - 1.0) > kSumTol) {
            diags.push_back({"row_sum", "transition row " + std::to_string(i) + " row sum " + fmt(sum)});
            stochastic = false;
        }
    }

    if (stochastic) {
        if (!is_irreducible(p)) {
            diags.push_back({"reducible", "transition matrix is reducible"});
        } else if (!is_primitive(p)) {
            diags.push_back({"periodic", "transition matrix is periodic"});
        }
    }

    const auto& pi = model.initial;
    if (pi.size() != m) {
        diags.push_back({"initial_shape", "initial law has " + std::to_string(pi.size()) +
                                              " entries, expected " + std::to_string(m)});
    } else {
        for (Eigen::Index i = 0; i < m; ++i)
            if (!std::isfinite(pi[i]) || pi[i] < 0.0)
                diags.push_back({"initial_entry", "initial(" + std::to_string(i) + ") = " + fmt(pi[i])});
        if (std::abs(pi.sum() - 1.0) > kSumTol)
            diags.push_back({"initial_sum", "initial law row sum " + fmt(pi.sum())});
        if (model.stationary_initial && stochastic) {
            double resid = (pi.transpose() * p - pi.transpose()).cwiseAbs().maxCoeff();
            if (resid > kSumTol)
                diags.push_back({"initial_not_stationary", "initial law flagged stationary but |pi P - pi| = " + fmt(resid)});
        }
    }

    if (const auto* cat = std::get_if<CategoricalEmission>(&model.emission)) {
        if (cat->probs.rows() != m || cat->probs.cols() < 1) {
            diags.push_back({"emission_shape", "categorical emission must have " + std::to_string(m) +
                                                   " rows and at least one column"});
        } else {
            for (Eigen::Index s = 0; s < m; ++s) {
                for (Eigen::Index k = 0; k < cat->probs.cols(); ++k)
                    if (!std::isfinite(cat->probs(s, k)) || cat->probs(s, k) < 0.0)
                        diags.push_back({"emission_entry", "emission(" + std::to_string(s) + "," +
                                                               std::to_string(k) + ") = " + fmt(cat->probs(s, k))});
                double sum = cat->probs.row(s).sum();
                if (std::abs(sum - 1.0) > kSumTol)
                    diags.push_back({"emission_row_sum", "emission row " + std::to_string(s) + " row sum " + fmt(sum)});
            }
        }
    } else {
        const auto& g = std::get<GaussianEmission>(model.emission);
        if (g.means.size() != m || g.stds.size() != m) {
            diags.push_back({"emission_shape", "gaussian means/stds must have " + std::to_string(m) + " entries"});
        } else {
            for (Eigen::Index s = 0; s < m; ++s) {
                if (!std::isfinite(g.means[s]))
                    diags.push_back({"emission_entry", "mean(" + std::to_string(s) + ") is not finite"});
                if (!std::isfinite(g.stds[s]) || g.stds[s] <= 0.0)
                    diags.push_back({"emission_std", "std(" + std::to_string(s) + ") = " + fmt(g.stds[s]) + " must be > 0"});
            }
        }
    }
    return diags;
}

HmmModel make_model(Matrix transition, EmissionFamily emission) {
    HmmModel model;
    model.transition = std::move(transition);
    model.emission = std::move(emission);
    model.stationary_initial = true;
    try {
        model.initial = stationary_distribution(model.transition);
    } catch (const std::exception&) {
        // Leave it to validate_model to say why.
        model.initial = Vector::Constant(model.transition.rows(), 1.0 / std::max<Eigen::Index>(1, model.transition.rows()));
        model.stationary_initial = false;
    }
    auto diags = validate_model(model);
    if (!diags.empty()) throw ModelValidationError(std::move(diags));
    return model;
}

HmmModel make_model(Matrix transition, Vector initial, EmissionFamily emission) {
    HmmModel model;
    model.transition = std::move(transition);
    model.initial = std::move(initial);
    model.emission = std::move(emission);
    model.stationary_initial = false;
    auto diags = validate_model(model);
    if (!diags.empty()) throw ModelValidationError(std::move(diags));
    return model;
}

Vector stationary_distribution(const Matrix& transition) {
    const Eigen::Index m = transition.rows();
    if (m == 0 || transition.cols() != m) throw std::domain_error("transition must be square");
    if (!is_irreducible(transition))
        throw std::domain_error("stationary distribution is not unique for a reducible chain");

    // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
    Eigen::MatrixXd a = transition.transpose() - Eigen::MatrixXd::Identity(m, m);
    a.row(m - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b[m - 1] = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) throw std::domain_error("singular stationary system");
    Vector pi = lu.solve(b);

    // A couple of fixed-point sweeps clean up the last few ulps.
    for (int it = 0; it < 4; ++it) {
        Vector next = (pi.transpose() * transition).transpose();
        next /= next.sum();
        pi = next;
    }
    double resid = (pi.transpose() * transition - pi.transpose()).cwiseAbs().maxCoeff();
    if (!(resid < 1e-12) || (pi.array() <= 0.0).any())
        throw std::domain_error("stationary solve did not converge");
    return pi;
}

double markov_entropy_rate(const Matrix& transition) {
    Vector pi = stationary_distribution(transition);
    double h = 0.0;
    for (Eigen::Index i = 0; i < transition.rows(); ++i) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < transition.cols(); ++j) {
            double p = transition(i, j);
            if (p > 0.0) row -= p * std::log(p);
        }
        h += pi[i] * row;
    }
    return h;
}

double markov_entropy_rate(const HmmModel& model) { return markov_entropy_rate(model.transition); }

double expected_log_emission(const HmmModel& model, State s) {
    if (const auto* cat = std::get_if<CategoricalEmission>(&model.emission)) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < cat->probs.cols(); ++k) {
            double f = cat->probs(s, k);
            if (f > 0.0) acc += f * std::log(f);
        }
        return acc;
    }
    const auto& g = std::get<GaussianEmission>(model.emission);
    double sd = g.stds[s];
    return -0.5 * std::log(2.0 * std::numbers::pi * sd * sd) - 0.5;
}

Matrix log_emission_matrix(const HmmModel& model, const Observations& x) {
    const int m = model.num_states();
    const std::size_t n = length(x);
    Matrix out(static_cast<Eigen::Index>(n), m);
    if (model.is_categorical()) {
        const auto* xs = std::get_if<std::vector<int>>(&x);
        if (!xs) throw std::invalid_argument("categorical model needs integer observations");
        for (std::size_t t = 0; t < n; ++t)
            for (int s = 0; s < m; ++s) out(static_cast<Eigen::Index>(t), s) = model.log_emission(s, (*xs)[t]);
    } else {
        const auto* xs = std::get_if<std::vector<double>>(&x);
        if (!xs) throw std::invalid_argument("gaussian model needs real observations");
        for (std::size_t t = 0; t < n; ++t)
            for (int s = 0; s < m; ++s) out(static_cast<Eigen::Index>(t), s) = model.log_emission(s, (*xs)[t]);
    }
    return out;
}

Matrix log_transition_matrix(const HmmModel& model) {
    return model.transition.unaryExpr([](double p) { return safe_log(p); });
}

Vector log_initial_vector(const HmmModel& model) {
    return model.initial.unaryExpr([](double p) { return safe_log(p); });
}

LabeledSample sample(const HmmModel& model, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample length must be >= 1");
    Rng rng(seed);
    LabeledSample out;
    out.seed = seed;
    out.y.resize(n);

    const auto* cat = std::get_if<CategoricalEmission>(&model.emission);
    const auto* gauss = std::get_if<GaussianEmission>(&model.emission);
    std::vector<int> xi;
    std::vector<double> xr;
    if (cat) xi.resize(n); else xr.resize(n);

    State s = 0;
    for (std::size_t t = 0; t < n; ++t) {
        s = t == 0 ? rng.categorical(model.initial) : rng.categorical(model.transition.row(s));
        out.y[t] = s;
        if (cat) {
            xi[t] = rng.categorical(cat->probs.row(s));
        } else {
            xr[t] = gauss->means[s] + gauss->stds[s] * rng.normal();
        }
    }
    if (cat) out.x = std::move(xi); else out.x = std::move(xr);
    return out;
}

HmmModel canonical_m2() {
    Matrix p(2, 2);
    p << 0.9, 0.1, 0.2, 0.8;
    Matrix f(2, 2);
    f << 0.8, 0.2, 0.3, 0.7;
    return make_model(p, CategoricalEmission{f});
}

HmmModel identity_emission_model() {
    Matrix p(2, 2);
    p << 0.9, 0.1, 0.2, 0.8;
    return make_model(p, CategoricalEmission{Matrix::Identity(2, 2)});
}

}  // namespace segrisk
