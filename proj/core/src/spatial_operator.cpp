#include "horizonwave/spatial_operator.hpp"

#include <algorithm>

#include "horizonwave/errors.hpp"

namespace horizonwave {
namespace {

void add_into(std::vector<double>& dst, const std::vector<double>& src) {
    if (src.empty()) return;
    if (dst.empty()) dst.assign(src.size(), 0.0);
    if (dst.size() != src.size()) throw DimensionMismatch("operator coefficient sizes differ");
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
}

bool all_zero(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

bool SpatialOperator::has_drift() const { return !all_zero(drift); }
bool SpatialOperator::has_second() const { return !all_zero(second); }

bool SpatialOperator::is_zero() const {
    return c0 == 0.0 && !has_drift() && !has_second() && (!multiplier || multiplier->is_zero());
}

Complex SpatialOperator::symbol(std::span<const double> k) const {
    Complex s{c0, 0.0};
    const std::size_t n = k.size();
    if (!drift.empty()) {
        double kv = 0.0;
        for (std::size_t a = 0; a < n; ++a) kv += drift[a] * k[a];
        s += Complex{0.0, kv};
    }
    if (!second.empty()) {
        double q = 0.0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) q += second[a * n + b] * k[a] * k[b];
        s -= q;
    }
    return s;
}

Field SpatialOperator::apply(const Field& u) const {
    if (u.components() != 1) throw DimensionMismatch("SpatialOperator acts on scalar fields");
    const auto& torus = u.torus();
    const int n = torus.dims();
    if ((!drift.empty() && static_cast<int>(drift.size()) != n) ||
        (!second.empty() && static_cast<int>(second.size()) != n * n)) {
        throw DimensionMismatch("operator coefficients do not match torus dimension");
    }
    std::vector<double> k(static_cast<std::size_t>(n));
    Field out = u.map_modes([&](std::size_t flat) {
        const auto slots = torus.unflatten(flat);
        for (int a = 0; a < n; ++a) k[static_cast<std::size_t>(a)] = torus.wavenumber(a, slots[a]);
        return symbol(k);
    });
    if (multiplier) out += multiply(*multiplier, u);
    return out;
}

SpatialOperator& SpatialOperator::operator+=(const SpatialOperator& other) {
    c0 += other.c0;
    add_into(drift, other.drift);
    add_into(second, other.second);
    if (other.multiplier) {
        if (multiplier) {
            *multiplier += *other.multiplier;
        } else {
            multiplier = other.multiplier;
        }
    }
    return *this;
}

SpatialOperator& SpatialOperator::operator*=(double s) {
    c0 *= s;
    for (auto& x : drift) x *= s;
    for (auto& x : second) x *= s;
    if (multiplier) *multiplier *= s;
    return *this;
}

OperatorMatrix::OperatorMatrix(int d) : d_(d), entries_(static_cast<std::size_t>(d * d)) {
    if (d < 1) throw ValidationError("operator matrix dimension must be >= 1");
}

OperatorMatrix OperatorMatrix::scalar(SpatialOperator op) {
    OperatorMatrix m(1);
    m.at(0, 0) = std::move(op);
    return m;
}

OperatorMatrix OperatorMatrix::identity(int d, double c) {
    OperatorMatrix m(d);
    for (int i = 0; i < d; ++i) m.at(i, i).c0 = c;
    return m;
}

SpatialOperator& OperatorMatrix::at(int row, int col) {
    return entries_.at(static_cast<std::size_t>(row * d_ + col));
}

const SpatialOperator& OperatorMatrix::at(int row, int col) const {
    return entries_.at(static_cast<std::size_t>(row * d_ + col));
}

Field OperatorMatrix::apply(const Field& u) const {
    if (u.components() != d_) throw DimensionMismatch("operator matrix / field dimension mismatch");
    if (d_ == 1) return entries_.front().apply(u);
    std::vector<Field> rows;
    rows.reserve(static_cast<std::size_t>(d_));
    std::vector<Field> parts;
    for (int c = 0; c < d_; ++c) parts.push_back(u.component(c));
    for (int r = 0; r < d_; ++r) {
        Field acc = Field::zeros(u.torus());
        for (int c = 0; c < d_; ++c) {
            if (!at(r, c).is_zero()) acc += at(r, c).apply(parts[static_cast<std::size_t>(c)]);
        }
        rows.push_back(std::move(acc));
    }
    return Field::from_components(rows);
}

std::vector<Complex> OperatorMatrix::symbol(std::span<const double> k) const {
    std::vector<Complex> s(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) s[i] = entries_[i].symbol(k);
    return s;
}

bool OperatorMatrix::has_variable_part() const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [](const SpatialOperator& e) { return e.multiplier.has_value(); });
}

bool OperatorMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const SpatialOperator& e) { return e.is_zero(); });
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& other) {
    if (d_ == 0) {
        *this = other;
        return *this;
    }
    if (other.d_ != d_) throw DimensionMismatch("operator matrix dimensions differ");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(double s) {
    for (auto& e : entries_) e *= s;
    return *this;
}

OperatorMatrix evaluate_series(const std::vector<OperatorMatrix>& coeffs, double t) {
    if (coeffs.empty()) throw ValidationError("empty operator series");
    OperatorMatrix acc(coeffs.front().dim());
    double power = 1.0;
    for (const auto& c : coeffs) {
        if (!c.is_zero() && power != 0.0) acc += power * c;
        power *= t;
    }
    return acc;
}

double evaluate_series(const std::vector<double>& coeffs, double t) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
}

}  // namespace horizonwave
