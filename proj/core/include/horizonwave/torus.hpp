#pragma once

#include <cstddef>
#include <vector>

namespace horizonwave {

/// Flat n-torus T^n = prod_i [0, P_i) sampled on a uniform tensor grid.
///
/// Spectra are stored in FFT order per axis (0, 1, ..., N/2, -N/2+1, ..., -1),
/// row-major with the last axis fastest. The index N/2 is the Nyquist slot and
/// is never populated by a Field.
class SpatialTorus {
public:
    /// Circle of circumference 2 pi with 16 points.
    SpatialTorus();
    SpatialTorus(std::vector<double> periods, std::vector<int> resolution);

    /// Circle of circumference `period` with `resolution` points.
    static SpatialTorus circle(double period, int resolution);

    int dims() const noexcept { return static_cast<int>(periods_.size()); }
    const std::vector<double>& periods() const noexcept { return periods_; }
    const std::vector<int>& resolution() const noexcept { return resolution_; }

    std::size_t size() const noexcept { return size_; }
    double volume() const noexcept;

    /// Signed integer mode number for FFT slot `index` on `axis`.
    int mode_number(int axis, int index) const;
    /// Angular wavenumber 2 pi k / P for FFT slot `index` on `axis`.
    double wavenumber(int axis, int index) const;
    bool is_nyquist(int axis, int index) const { return 2 * index == resolution_[axis]; }

    /// Per-axis slot indices of a flat index.
    std::vector<int> unflatten(std::size_t flat) const;
    std::size_t flatten(const std::vector<int>& slots) const;

    /// Signed integer mode vector of a flat index.
    std::vector<int> mode_vector(std::size_t flat) const;
    /// Flat slot of a signed mode vector, which must satisfy |k_i| < N_i / 2.
    std::size_t slot_of_mode(const std::vector<int>& mode) const;
    /// Flat slot of -k (Hermitian partner).
    std::size_t conjugate_slot(std::size_t flat) const;
    /// True if any axis of `flat` sits on its Nyquist slot.
    bool touches_nyquist(std::size_t flat) const;

    /// Coordinates of grid point `flat` (same flattening as spectra).
    std::vector<double> point(std::size_t flat) const;

    bool operator==(const SpatialTorus& other) const = default;

private:
    std::vector<double> periods_;
    std::vector<int> resolution_;
    std::size_t size_ = 0;
};

}  // namespace horizonwave
