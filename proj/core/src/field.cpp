#include "horizonwave/field.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fft.hpp"
#include "horizonwave/errors.hpp"

namespace horizonwave {

FlatMetric FlatMetric::identity(int dims) {
    FlatMetric m;
    m.g.assign(static_cast<std::size_t>(dims * dims), 0.0);
    for (int i = 0; i < dims; ++i) m.g[static_cast<std::size_t>(i * dims + i)] = 1.0;
    return m;
}

Field::Field(SpatialTorus torus, int components)
    : torus_(std::move(torus)), components_(components) {
    if (components_ < 1) throw ValidationError("field needs at least one component");
    data_.assign(torus_.size() * static_cast<std::size_t>(components_), Complex{});
}

Field Field::zeros(const SpatialTorus& torus, int components) { return Field(torus, components); }

Field Field::constant(const SpatialTorus& torus, double value) {
    Field f(torus, 1);
    f.data_[0] = value;
    return f;
}

Field Field::constant_vector(const SpatialTorus& torus, const std::vector<double>& values) {
    Field f(torus, static_cast<int>(values.size()));
    for (std::size_t c = 0; c < values.size(); ++c) f.data_[c * torus.size()] = values[c];
    return f;
}

Field Field::from_samples(const SpatialTorus& torus, std::span<const double> samples) {
    if (samples.size() != torus.size()) {
        throw DimensionMismatch("sample count does not match torus size");
    }
    Field f(torus, 1);
    std::copy(samples.begin(), samples.end(), f.data_.begin());
    detail::fft_forward(f.data_, torus.resolution());
    const double scale = 1.0 / static_cast<double>(torus.size());
    for (auto& c : f.data_) c *= scale;
    f.symmetrize();
    return f;
}

Field Field::from_function(const SpatialTorus& torus,
                           const std::function<double(std::span<const double>)>& fn) {
    std::vector<double> samples(torus.size());
    for (std::size_t i = 0; i < torus.size(); ++i) {
        const auto x = torus.point(i);
        samples[i] = fn(x);
    }
    return from_samples(torus, samples);
}

Field Field::from_coefficients(const SpatialTorus& torus, int components,
                               std::vector<Complex> coeffs) {
    Field f(torus, components);
    if (coeffs.size() != f.data_.size()) {
        throw DimensionMismatch("coefficient count does not match torus size x components");
    }
    f.data_ = std::move(coeffs);
    f.symmetrize();
    return f;
}

Field Field::from_components(const std::vector<Field>& parts) {
    if (parts.empty()) throw ValidationError("from_components needs at least one part");
    int total = 0;
    for (const auto& p : parts) {
        if (!(p.torus() == parts.front().torus())) {
            throw DimensionMismatch("components live on different tori");
        }
        total += p.components();
    }
    Field f(parts.front().torus(), total);
    auto out = f.data_.begin();
    for (const auto& p : parts) out = std::copy(p.data_.begin(), p.data_.end(), out);
    return f;
}

std::span<const Complex> Field::coeffs(int component) const {
    return {data_.data() + static_cast<std::size_t>(component) * modes(), modes()};
}

std::span<Complex> Field::coeffs(int component) {
    return {data_.data() + static_cast<std::size_t>(component) * modes(), modes()};
}

Complex Field::coeff(const std::vector<int>& mode, int component) const {
    return coeffs(component)[torus_.slot_of_mode(mode)];
}

void Field::set_mode(const std::vector<int>& mode, Complex value, int component) {
    const auto slot = torus_.slot_of_mode(mode);
    auto c = coeffs(component);
    c[slot] = value;
    c[torus_.conjugate_slot(slot)] = std::conj(value);
    if (torus_.conjugate_slot(slot) == slot) c[slot] = value.real();
}

Field Field::component(int c) const {
    if (c < 0 || c >= components_) throw ValidationError("component index out of range");
    Field f(torus_, 1);
    const auto src = coeffs(c);
    std::copy(src.begin(), src.end(), f.data_.begin());
    return f;
}

std::vector<double> Field::samples(int component) const {
    const auto src = coeffs(component);
    std::vector<Complex> work(src.begin(), src.end());
    detail::fft_backward(work, torus_.resolution());
    std::vector<double> out(work.size());
    std::transform(work.begin(), work.end(), out.begin(), [](Complex z) { return z.real(); });
    return out;
}

double Field::l2_norm() const {
    double sum = 0.0;
    for (const auto& c : data_) sum += std::norm(c);
    return std::sqrt(sum * torus_.volume());
}

double Field::max_abs() const {
    double m = 0.0;
    for (int c = 0; c < components_; ++c) {
        for (double v : samples(c)) m = std::max(m, std::abs(v));
    }
    return m;
}

double Field::min_sample() const {
    double m = std::numeric_limits<double>::infinity();
    for (int c = 0; c < components_; ++c) {
        for (double v : samples(c)) m = std::min(m, v);
    }
    return m;
}

double Field::hermitian_defect() const {
    double defect = 0.0;
    for (int c = 0; c < components_; ++c) {
        const auto s = coeffs(c);
        for (std::size_t i = 0; i < modes(); ++i) {
            defect = std::max(defect, std::abs(s[torus_.conjugate_slot(i)] - std::conj(s[i])));
        }
    }
    return defect;
}

void Field::symmetrize() {
    for (int c = 0; c < components_; ++c) {
        auto s = coeffs(c);
        for (std::size_t i = 0; i < modes(); ++i) {
            if (torus_.touches_nyquist(i)) {
                s[i] = 0.0;
                continue;
            }
            const auto j = torus_.conjugate_slot(i);
            if (j < i) continue;
            const Complex avg = 0.5 * (s[i] + std::conj(s[j]));
            s[i] = avg;
            s[j] = std::conj(avg);
        }
    }
}

bool Field::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Complex z) { return z == Complex{}; });
}

void Field::check_compatible(const Field& other) const {
    if (!(torus_ == other.torus_) || components_ != other.components_) {
        throw DimensionMismatch("fields differ in torus or component count");
    }
}

Field& Field::operator+=(const Field& other) {
    check_compatible(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    check_compatible(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Field& Field::operator*=(double s) {
    for (auto& c : data_) c *= s;
    return *this;
}

Field Field::map_modes(const std::function<Complex(std::size_t)>& multiplier) const {
    Field out(*this);
    for (std::size_t i = 0; i < modes(); ++i) {
        const Complex m = multiplier(i);
        for (int c = 0; c < components_; ++c) out.coeffs(c)[i] *= m;
    }
    return out;
}

Field derivative(const Field& f, int axis, int order) {
    const auto& torus = f.torus();
    if (axis < 0 || axis >= torus.dims()) throw ValidationError("derivative axis out of range");
    if (order < 0) throw ValidationError("derivative order must be non-negative");
    return f.map_modes([&](std::size_t flat) {
        const auto slots = torus.unflatten(flat);
        const Complex ik{0.0, torus.wavenumber(axis, slots[axis])};
        return std::pow(ik, order);
    });
}

Field directional_derivative(const Field& f, std::span<const double> v) {
    const auto& torus = f.torus();
    if (static_cast<int>(v.size()) != torus.dims()) {
        throw DimensionMismatch("direction length does not match torus dimension");
    }
    return f.map_modes([&](std::size_t flat) {
        const auto slots = torus.unflatten(flat);
        double kv = 0.0;
        for (int a = 0; a < torus.dims(); ++a) kv += v[a] * torus.wavenumber(a, slots[a]);
        return Complex{0.0, kv};
    });
}

namespace {

// Slot of an active (non-Nyquist) mode on the padded grid of shape `padded`.
std::size_t padded_slot(const SpatialTorus& torus, std::size_t flat,
                        const std::vector<int>& padded) {
    const auto mode = torus.mode_vector(flat);
    std::size_t out = 0;
    for (int a = 0; a < torus.dims(); ++a) {
        const int m = padded[a];
        const int slot = mode[a] >= 0 ? mode[a] : mode[a] + m;
        out = out * static_cast<std::size_t>(m) + static_cast<std::size_t>(slot);
    }
    return out;
}

}  // namespace

Field multiply(const Field& f, const Field& g) {
    if (!(f.torus() == g.torus())) throw DimensionMismatch("multiply: fields on different tori");
    if (f.components() != g.components() && f.components() != 1 && g.components() != 1) {
        throw DimensionMismatch("multiply: incompatible component counts");
    }
    const auto& torus = f.torus();
    std::vector<int> padded(torus.resolution());
    std::size_t padded_size = 1;
    for (auto& m : padded) {
        m = 3 * m / 2;
        padded_size *= static_cast<std::size_t>(m);
    }
    std::vector<std::size_t> map(torus.size(), padded_size);
    for (std::size_t i = 0; i < torus.size(); ++i) {
        if (!torus.touches_nyquist(i)) map[i] = padded_slot(torus, i, padded);
    }

    auto to_grid = [&](const Field& h, int c) {
        std::vector<Complex> work(padded_size);
        const auto s = h.coeffs(c);
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (map[i] < padded_size) work[map[i]] = s[i];
        }
        detail::fft_backward(work, padded);
        return work;
    };

    const int d = std::max(f.components(), g.components());
    Field out(torus, d);
    const double scale = 1.0 / static_cast<double>(padded_size);
    for (int c = 0; c < d; ++c) {
        auto a = to_grid(f, f.components() == 1 ? 0 : c);
        const auto b = to_grid(g, g.components() == 1 ? 0 : c);
        for (std::size_t i = 0; i < padded_size; ++i) a[i] = Complex{a[i].real() * b[i].real(), 0.0};
        detail::fft_forward(a, padded);
        auto dst = out.coeffs(c);
        for (std::size_t i = 0; i < torus.size(); ++i) {
            if (map[i] < padded_size) dst[i] = a[map[i]] * scale;
        }
    }
    out.symmetrize();
    return out;
}

double sobolev_norm(const Field& f, double s, const FlatMetric& sigma) {
    const auto& torus = f.torus();
    const int n = torus.dims();
    if (static_cast<int>(sigma.g.size()) != n * n) {
        throw DimensionMismatch("sigma metric size does not match torus dimension");
    }
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = sigma.g[static_cast<std::size_t>(i * n + j)];
    const Eigen::MatrixXd ginv = g.inverse();
    const double vol = torus.volume() * std::sqrt(g.determinant());

    double sum = 0.0;
    Eigen::VectorXd k(n);
    for (std::size_t i = 0; i < torus.size(); ++i) {
        const auto slots = torus.unflatten(i);
        for (int a = 0; a < n; ++a) k(a) = torus.wavenumber(a, slots[a]);
        const double weight = std::pow(1.0 + k.dot(ginv * k), s);
        double amp = 0.0;
        for (int c = 0; c < f.components(); ++c) amp += std::norm(f.coeffs(c)[i]);
        sum += weight * amp;
    }
    return std::sqrt(sum * vol);
}

double sobolev_norm(const Field& f, double s) {
    return sobolev_norm(f, s, FlatMetric::identity(f.torus().dims()));
}

Field apply_pointwise(const Field& f, const std::function<double(double)>& fn) {
    std::vector<Field> parts;
    for (int c = 0; c < f.components(); ++c) {
        auto values = f.samples(c);
        for (auto& v : values) v = fn(v);
        parts.push_back(Field::from_samples(f.torus(), values));
    }
    return parts.size() == 1 ? parts.front() : Field::from_components(parts);
}

Field translate(const Field& f, std::span<const double> shift) {
    const auto& torus = f.torus();
    if (static_cast<int>(shift.size()) != torus.dims()) {
        throw DimensionMismatch("shift length does not match torus dimension");
    }
    return f.map_modes([&](std::size_t flat) {
        const auto slots = torus.unflatten(flat);
        double phase = 0.0;
        for (int a = 0; a < torus.dims(); ++a) phase += torus.wavenumber(a, slots[a]) * shift[a];
        return std::polar(1.0, phase);
    });
}

double inner_product(const Field& f, const Field& g) {
    if (!(f.torus() == g.torus()) || f.components() != g.components()) {
        throw DimensionMismatch("inner_product: incompatible fields");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < f.data().size(); ++i) {
        sum += (f.data()[i] * std::conj(g.data()[i])).real();
    }
    return sum * f.torus().volume();
}

}  // namespace horizonwave
