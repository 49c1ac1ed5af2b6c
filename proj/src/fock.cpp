#include "su11/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

namespace su11 {

std::size_t default_max_dimension() {
    if (const char* env = std::getenv("SU11_MAX_DIM"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != nullptr && *end == '\0' && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return kDefaultMaxDimension;
}

namespace {

constexpr std::size_t kSaturated = std::numeric_limits<std::size_t>::max();

std::size_t saturating_mul(std::size_t a, std::size_t b) {
    if (a != 0 && b > kSaturated / a) {
        return kSaturated;
    }
    return a * b;
}

std::size_t saturating_add(std::size_t a, std::size_t b) {
    return (b > kSaturated - a) ? kSaturated : a + b;
}

// Number of occupation vectors over `modes` modes with entries < cutoff and sum <= cap.
std::size_t count_capped(int modes, int cutoff, int cap) {
    // ways[t] = number of vectors over the modes seen so far with total exactly t.
    std::vector<std::size_t> ways(static_cast<std::size_t>(cap) + 1, 0);
    ways[0] = 1;
    for (int m = 0; m < modes; ++m) {
        std::vector<std::size_t> next(ways.size(), 0);
        for (int t = 0; t <= cap; ++t) {
            if (ways[t] == 0) {
                continue;
            }
            for (int n = 0; n < cutoff && t + n <= cap; ++n) {
                next[t + n] = saturating_add(next[t + n], ways[t]);
            }
        }
        ways = std::move(next);
    }
    std::size_t total = 0;
    for (std::size_t w : ways) {
        total = saturating_add(total, w);
    }
    return total;
}

void enumerate_capped(int mode, int modes, int cutoff, int remaining, Occupations& current,
                      std::vector<int>& out) {
    if (mode == modes) {
        out.insert(out.end(), current.begin(), current.end());
        return;
    }
    for (int n = 0; n < cutoff && n <= remaining; ++n) {
        current[mode] = n;
        enumerate_capped(mode + 1, modes, cutoff, remaining - n, current, out);
    }
    current[mode] = 0;
}

}  // namespace

FockSpace::FockSpace(int num_modes, int cutoff, std::optional<int> total_photon_cap,
                     std::size_t max_dimension)
    : num_modes_(num_modes), cutoff_(cutoff), cap_(total_photon_cap) {
    if (num_modes < 1) {
        throw DomainError("FockSpace: num_modes must be >= 1, got " + std::to_string(num_modes));
    }
    if (cutoff < 2) {
        throw DomainError("FockSpace: cutoff must be >= 2, got " + std::to_string(cutoff));
    }
    if (cap_ && *cap_ < 0) {
        throw DomainError("FockSpace: total_photon_cap must be nonnegative");
    }
    std::size_t dim = 0;
    if (cap_) {
        dim = count_capped(num_modes, cutoff, *cap_);
    } else {
        dim = 1;
        for (int m = 0; m < num_modes; ++m) {
            dim = saturating_mul(dim, static_cast<std::size_t>(cutoff));
        }
    }
    if (dim > max_dimension) {
        throw CapacityError("FockSpace: dimension exceeds capacity limit " +
                            std::to_string(max_dimension));
    }
    dimension_ = dim;
    if (cap_) {
        table_.reserve(dim * static_cast<std::size_t>(num_modes));
        Occupations current(static_cast<std::size_t>(num_modes), 0);
        enumerate_capped(0, num_modes, cutoff, *cap_, current, table_);
    }
}

Occupations FockSpace::occupations(std::size_t index) const {
    Occupations occ(static_cast<std::size_t>(num_modes_));
    if (cap_) {
        const auto* row = table_.data() + index * static_cast<std::size_t>(num_modes_);
        std::copy(row, row + num_modes_, occ.begin());
        return occ;
    }
    for (int m = num_modes_ - 1; m >= 0; --m) {
        occ[static_cast<std::size_t>(m)] = static_cast<int>(index % static_cast<std::size_t>(cutoff_));
        index /= static_cast<std::size_t>(cutoff_);
    }
    return occ;
}

int FockSpace::occupation(std::size_t index, int mode) const {
    if (cap_) {
        return table_[index * static_cast<std::size_t>(num_modes_) + static_cast<std::size_t>(mode)];
    }
    for (int m = num_modes_ - 1; m > mode; --m) {
        index /= static_cast<std::size_t>(cutoff_);
    }
    return static_cast<int>(index % static_cast<std::size_t>(cutoff_));
}

int FockSpace::total_photons(std::size_t index) const {
    const Occupations occ = occupations(index);
    return std::accumulate(occ.begin(), occ.end(), 0);
}

std::optional<std::size_t> FockSpace::index_of(std::span<const int> occ) const {
    if (static_cast<int>(occ.size()) != num_modes_) {
        throw DomainError("FockSpace::index_of: occupation vector has wrong length");
    }
    int total = 0;
    for (int n : occ) {
        if (n < 0 || n >= cutoff_) {
            return std::nullopt;
        }
        total += n;
    }
    if (cap_) {
        if (total > *cap_) {
            return std::nullopt;
        }
        // The table is sorted lexicographically, so binary search over rows.
        const std::size_t width = static_cast<std::size_t>(num_modes_);
        std::size_t lo = 0;
        std::size_t hi = dimension_;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            const auto* row = table_.data() + mid * width;
            if (std::lexicographical_compare(row, row + width, occ.begin(), occ.end())) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        return lo;
    }
    std::size_t index = 0;
    for (int n : occ) {
        index = index * static_cast<std::size_t>(cutoff_) + static_cast<std::size_t>(n);
    }
    return index;
}

int FockSpace::max_total_photons() const {
    const int uncapped = (cutoff_ - 1) * num_modes_;
    return cap_ ? std::min(*cap_, uncapped) : uncapped;
}

SpacePtr make_space(int num_modes, int cutoff, std::optional<int> total_photon_cap,
                    std::size_t max_dimension) {
    return std::make_shared<const FockSpace>(num_modes, cutoff, total_photon_cap, max_dimension);
}

// ---------------------------------------------------------------------------

namespace {

void drop_exact_zeros(SparseMatrix& m) {
    m.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return v != Complex(0.0, 0.0); });
}

}  // namespace

void require_same_space(const FockSpace& x, const FockSpace& y) {
    if (!(x == y)) {
        throw DomainError("operator spaces do not match");
    }
}

LinearOperator::LinearOperator(SpacePtr space, SparseMatrix matrix, bool hermitian_hint)
    : space_(std::move(space)), matrix_(std::move(matrix)), hermitian_hint_(hermitian_hint) {
    const auto dim = static_cast<Eigen::Index>(space_->dimension());
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
        throw DomainError("LinearOperator: matrix shape does not match space dimension");
    }
    matrix_.makeCompressed();
}

LinearOperator LinearOperator::zero(SpacePtr space) {
    const auto dim = static_cast<Eigen::Index>(space->dimension());
    return {std::move(space), SparseMatrix(dim, dim), true};
}

LinearOperator LinearOperator::identity(SpacePtr space) {
    const auto dim = static_cast<Eigen::Index>(space->dimension());
    SparseMatrix m(dim, dim);
    m.setIdentity();
    return {std::move(space), std::move(m), true};
}

Complex LinearOperator::entry(std::size_t row, std::size_t col) const {
    return matrix_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

LinearOperator LinearOperator::adjoint() const {
    SparseMatrix m = matrix_.adjoint();
    return {space_, std::move(m), hermitian_hint_};
}

LinearOperator LinearOperator::pruned(double floor) const {
    SparseMatrix m = matrix_;
    m.prune([floor](Eigen::Index, Eigen::Index, const Complex& v) {
        return v != Complex(0.0, 0.0) && std::abs(v) > floor;
    });
    return {space_, std::move(m), hermitian_hint_};
}

DenseMatrix LinearOperator::dense() const { return DenseMatrix(matrix_); }

LinearOperator operator+(const LinearOperator& x, const LinearOperator& y) {
    require_same_space(*x.space_, *y.space_);
    SparseMatrix m = x.matrix_ + y.matrix_;
    drop_exact_zeros(m);
    return {x.space_, std::move(m), x.hermitian_hint_ && y.hermitian_hint_};
}

LinearOperator operator-(const LinearOperator& x, const LinearOperator& y) {
    require_same_space(*x.space_, *y.space_);
    SparseMatrix m = x.matrix_ - y.matrix_;
    drop_exact_zeros(m);
    return {x.space_, std::move(m), x.hermitian_hint_ && y.hermitian_hint_};
}

LinearOperator operator*(const LinearOperator& x, const LinearOperator& y) {
    require_same_space(*x.space_, *y.space_);
    SparseMatrix m = x.matrix_ * y.matrix_;
    drop_exact_zeros(m);
    return {x.space_, std::move(m), false};
}

LinearOperator operator*(Complex s, const LinearOperator& x) {
    SparseMatrix m = s * x.matrix_;
    drop_exact_zeros(m);
    return {x.space_, std::move(m), x.hermitian_hint_ && s.imag() == 0.0};
}

LinearOperator operator-(const LinearOperator& x) {
    SparseMatrix m = -x.matrix_;
    return {x.space_, std::move(m), x.hermitian_hint_};
}

// ---------------------------------------------------------------------------

StateVector::StateVector(SpacePtr space, DenseVector amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != static_cast<Eigen::Index>(space_->dimension())) {
        throw DomainError("StateVector: amplitude count does not match space dimension");
    }
    if (!std::isfinite(amplitudes_.norm())) {
        throw NumericalError("StateVector: norm is not finite");
    }
}

StateVector StateVector::zero(SpacePtr space) {
    DenseVector v = DenseVector::Zero(static_cast<Eigen::Index>(space->dimension()));
    return {std::move(space), std::move(v)};
}

StateVector StateVector::basis(SpacePtr space, std::span<const int> occupations) {
    const auto index = space->index_of(occupations);
    if (!index) {
        throw CapacityError("StateVector::basis: occupation vector outside the truncated space");
    }
    DenseVector v = DenseVector::Zero(static_cast<Eigen::Index>(space->dimension()));
    v[static_cast<Eigen::Index>(*index)] = 1.0;
    return {std::move(space), std::move(v)};
}

StateVector StateVector::vacuum(SpacePtr space) {
    const Occupations zeros(static_cast<std::size_t>(space->num_modes()), 0);
    return basis(std::move(space), zeros);
}

Complex StateVector::amplitude(std::span<const int> occupations) const {
    const auto index = space_->index_of(occupations);
    return index ? amplitudes_[static_cast<Eigen::Index>(*index)] : Complex(0.0, 0.0);
}

Complex StateVector::inner(const StateVector& other) const {
    require_same_space(*space_, *other.space_);
    return amplitudes_.dot(other.amplitudes_);
}

// ---------------------------------------------------------------------------

namespace {

void check_mode(const FockSpace& space, int mode) {
    if (mode < 0 || mode >= space.num_modes()) {
        throw DomainError("mode index " + std::to_string(mode) + " out of range for " +
                          std::to_string(space.num_modes()) + "-mode space");
    }
}

}  // namespace

LinearOperator annihilation(const SpacePtr& space, int mode) {
    check_mode(*space, mode);
    const auto dim = static_cast<Eigen::Index>(space->dimension());
    std::vector<Eigen::Triplet<Complex>> entries;
    entries.reserve(space->dimension());
    for (std::size_t col = 0; col < space->dimension(); ++col) {
        Occupations occ = space->occupations(col);
        const int n = occ[static_cast<std::size_t>(mode)];
        if (n == 0) {
            continue;
        }
        occ[static_cast<std::size_t>(mode)] = n - 1;
        // Lowering never leaves the space, capped or not.
        const auto row = space->index_of(occ);
        entries.emplace_back(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col),
                             std::sqrt(static_cast<double>(n)));
    }
    SparseMatrix m(dim, dim);
    m.setFromTriplets(entries.begin(), entries.end());
    return {space, std::move(m), false};
}

LinearOperator creation(const SpacePtr& space, int mode) {
    // Hard truncation: raising out of the space gives zero.
    return annihilation(space, mode).adjoint();
}

LinearOperator number_operator(const SpacePtr& space, int mode) {
    check_mode(*space, mode);
    const auto dim = static_cast<Eigen::Index>(space->dimension());
    std::vector<Eigen::Triplet<Complex>> entries;
    for (std::size_t i = 0; i < space->dimension(); ++i) {
        const int n = space->occupation(i, mode);
        if (n != 0) {
            entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i),
                                 static_cast<double>(n));
        }
    }
    SparseMatrix m(dim, dim);
    m.setFromTriplets(entries.begin(), entries.end());
    return {space, std::move(m), true};
}

LinearOperator commutator(const LinearOperator& x, const LinearOperator& y) {
    require_same_space(*x.space(), *y.space());
    SparseMatrix m = x.matrix() * y.matrix() - y.matrix() * x.matrix();
    drop_exact_zeros(m);
    return {x.space(), std::move(m), false};
}

double one_norm(const SparseMatrix& m) {
    double best = 0.0;
    for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
        double col = 0.0;
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            col += std::abs(it.value());
        }
        if (!std::isfinite(col)) {
            return col;
        }
        best = std::max(best, col);
    }
    return best;
}

LinearOperator expm(const LinearOperator& g, Complex scale) {
    constexpr double kSeriesTolerance = 1e-13;
    constexpr double kScaledNormTarget = 0.5;
    constexpr int kMaxOrder = 60;

    SparseMatrix a = scale * g.matrix();
    const double norm = one_norm(a);
    if (!std::isfinite(norm)) {
        throw NumericalError("expm: generator norm is not finite");
    }
    int squarings = 0;
    if (norm > kScaledNormTarget) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / kScaledNormTarget)));
        a /= std::ldexp(1.0, squarings);
    }
    const double scaled_norm = std::min(norm, kScaledNormTarget);

    const auto dim = static_cast<Eigen::Index>(g.dimension());
    SparseMatrix result(dim, dim);
    result.setIdentity();
    SparseMatrix term = result;
    // Remainder after order k is bounded by |A|^(k+1)/(k+1)! * 1/(1 - |A|/(k+2)).
    double bound = 1.0;
    bool converged = scaled_norm == 0.0;
    for (int k = 1; k <= kMaxOrder && !converged; ++k) {
        term = (term * a) / static_cast<double>(k);
        drop_exact_zeros(term);
        result += term;
        bound *= scaled_norm / static_cast<double>(k + 1);
        const double tail = bound / (1.0 - scaled_norm / static_cast<double>(k + 2));
        converged = tail < kSeriesTolerance;
    }
    if (!converged) {
        throw NumericalError("expm: Taylor series did not converge at maximum order");
    }
    for (int i = 0; i < squarings; ++i) {
        result = result * result;
    }
    drop_exact_zeros(result);
    return {g.space(), std::move(result), false};
}

DenseMatrix expm_apply(const LinearOperator& g, const DenseMatrix& x, Complex scale) {
    constexpr double kSeriesTolerance = 1e-13;
    constexpr double kStepNormTarget = 2.0;
    constexpr int kMaxOrder = 60;

    if (x.rows() != static_cast<Eigen::Index>(g.dimension())) {
        throw DomainError("expm_apply: column length does not match the space dimension");
    }
    SparseMatrix a = scale * g.matrix();
    const double norm = one_norm(a);
    if (!std::isfinite(norm)) {
        throw NumericalError("expm: generator norm is not finite");
    }
    const int steps = norm > kStepNormTarget
                          ? static_cast<int>(std::ceil(norm / kStepNormTarget))
                          : 1;
    a /= static_cast<double>(steps);
    const double step_norm = norm / steps;

    // Row-major blocks keep each basis row contiguous in the sparse product.
    using Block = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::SparseMatrix<Complex, Eigen::RowMajor> rows = a;
    Block out = x;
    Block term(x.rows(), x.cols());
    Block next(x.rows(), x.cols());
    for (int step = 0; step < steps && step_norm > 0.0; ++step) {
        term = out;
        double bound = 1.0;
        bool converged = false;
        for (int k = 1; k <= kMaxOrder && !converged; ++k) {
            next.noalias() = rows * term;
            term.swap(next);
            term /= static_cast<double>(k);
            out += term;
            bound *= step_norm / static_cast<double>(k + 1);
            converged = bound / (1.0 - step_norm / static_cast<double>(k + 2)) < kSeriesTolerance;
        }
        if (!converged) {
            throw NumericalError("expm: Taylor series did not converge at maximum order");
        }
    }
    return out;
}

StateVector expm_apply(const LinearOperator& g, const StateVector& psi, Complex scale) {
    require_same_space(*g.space(), *psi.space());
    DenseMatrix out = expm_apply(g, DenseMatrix(psi.amplitudes()), scale);
    return {psi.space(), DenseVector(out.col(0))};
}

StateVector apply(const LinearOperator& op, const StateVector& psi) {
    require_same_space(*op.space(), *psi.space());
    DenseVector out = op.matrix() * psi.amplitudes();
    return {psi.space(), std::move(out)};
}

std::vector<std::size_t> safe_indices(const FockSpace& space, int max_total_photons) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        if (space.total_photons(i) <= max_total_photons) {
            out.push_back(i);
        }
    }
    return out;
}

LinearOperator restrict(const LinearOperator& op, int max_total_photons) {
    const FockSpace& space = *op.space();
    std::vector<bool> keep(space.dimension());
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        keep[i] = space.total_photons(i) <= max_total_photons;
    }
    SparseMatrix m = op.matrix();
    m.prune([&keep](Eigen::Index row, Eigen::Index col, const Complex&) {
        return keep[static_cast<std::size_t>(row)] && keep[static_cast<std::size_t>(col)];
    });
    return {op.space(), std::move(m), op.hermitian_hint()};
}

double max_abs(const LinearOperator& op) {
    double best = 0.0;
    const SparseMatrix& m = op.matrix();
    for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            best = std::max(best, std::abs(it.value()));
        }
    }
    return best;
}

double max_abs_restricted(const LinearOperator& op, int max_total_photons) {
    return max_abs(restrict(op, max_total_photons));
}

}  // namespace su11
