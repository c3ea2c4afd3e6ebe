#include "horizonwave/torus.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "horizonwave/errors.hpp"

namespace horizonwave {

SpatialTorus::SpatialTorus() : SpatialTorus({2.0 * std::numbers::pi}, {16}) {}

SpatialTorus::SpatialTorus(std::vector<double> periods, std::vector<int> resolution)
    : periods_(std::move(periods)), resolution_(std::move(resolution)) {
    if (periods_.empty()) {
        throw ValidationError("torus needs at least one dimension");
    }
    if (periods_.size() != resolution_.size()) {
        throw ValidationError("torus periods and resolution differ in length");
    }
    size_ = 1;
    for (std::size_t i = 0; i < periods_.size(); ++i) {
        if (!(periods_[i] > 0.0) || !std::isfinite(periods_[i])) {
            throw ValidationError("torus period must be positive, axis " + std::to_string(i));
        }
        if (resolution_[i] < 4 || resolution_[i] % 2 != 0) {
            throw ValidationError("torus resolution must be even and >= 4, axis " +
                                  std::to_string(i));
        }
        size_ *= static_cast<std::size_t>(resolution_[i]);
    }
}

SpatialTorus SpatialTorus::circle(double period, int resolution) {
    return SpatialTorus({period}, {resolution});
}

double SpatialTorus::volume() const noexcept {
    double v = 1.0;
    for (double p : periods_) v *= p;
    return v;
}

int SpatialTorus::mode_number(int axis, int index) const {
    const int n = resolution_[axis];
    return 2 * index <= n ? index : index - n;
}

double SpatialTorus::wavenumber(int axis, int index) const {
    return 2.0 * std::numbers::pi * mode_number(axis, index) / periods_[axis];
}

std::vector<int> SpatialTorus::unflatten(std::size_t flat) const {
    std::vector<int> slots(resolution_.size());
    for (int a = dims() - 1; a >= 0; --a) {
        const auto n = static_cast<std::size_t>(resolution_[a]);
        slots[a] = static_cast<int>(flat % n);
        flat /= n;
    }
    return slots;
}

std::size_t SpatialTorus::flatten(const std::vector<int>& slots) const {
    std::size_t flat = 0;
    for (int a = 0; a < dims(); ++a) {
        flat = flat * static_cast<std::size_t>(resolution_[a]) + static_cast<std::size_t>(slots[a]);
    }
    return flat;
}

std::vector<int> SpatialTorus::mode_vector(std::size_t flat) const {
    auto slots = unflatten(flat);
    for (int a = 0; a < dims(); ++a) slots[a] = mode_number(a, slots[a]);
    return slots;
}

std::size_t SpatialTorus::slot_of_mode(const std::vector<int>& mode) const {
    if (static_cast<int>(mode.size()) != dims()) {
        throw DimensionMismatch("mode vector length does not match torus dimension");
    }
    std::vector<int> slots(mode.size());
    for (int a = 0; a < dims(); ++a) {
        const int n = resolution_[a];
        if (2 * std::abs(mode[a]) >= n) {
            throw ValidationError("mode outside the resolved band");
        }
        slots[a] = mode[a] >= 0 ? mode[a] : mode[a] + n;
    }
    return flatten(slots);
}

std::size_t SpatialTorus::conjugate_slot(std::size_t flat) const {
    auto slots = unflatten(flat);
    for (int a = 0; a < dims(); ++a) {
        const int n = resolution_[a];
        slots[a] = (n - slots[a]) % n;
    }
    return flatten(slots);
}

bool SpatialTorus::touches_nyquist(std::size_t flat) const {
    const auto slots = unflatten(flat);
    for (int a = 0; a < dims(); ++a) {
        if (is_nyquist(a, slots[a])) return true;
    }
    return false;
}

std::vector<double> SpatialTorus::point(std::size_t flat) const {
    auto slots = unflatten(flat);
    std::vector<double> x(slots.size());
    for (int a = 0; a < dims(); ++a) {
        x[a] = periods_[a] * slots[a] / resolution_[a];
    }
    return x;
}

}  // namespace horizonwave
