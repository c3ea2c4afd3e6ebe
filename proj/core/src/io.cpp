#include "horizonwave/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <fstream>

#include <json.hpp>

#include "horizonwave/errors.hpp"

namespace horizonwave::io {
namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
    return out;
}

void put_f64(std::ostream& out, double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    std::array<char, 8> bytes{};
    for (int i = 0; i < 8; ++i) bytes[static_cast<std::size_t>(i)] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(bytes.data(), 8);
}

double get_f64(std::istream& in) {
    std::array<char, 8> bytes{};
    in.read(bytes.data(), 8);
    if (!in) throw ValidationError("coefficient dump is truncated");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[static_cast<std::size_t>(i)])) << (8 * i);
    }
    return std::bit_cast<double>(bits);
}

json layout_json(const SpatialTorus& torus, int components, std::size_t fields) {
    return {{"format", "horizonwave-coefficients"},
            {"version", 1},
            {"dtype", "f64"},
            {"endianness", "little"},
            {"layout", "re_im_interleaved"},
            {"mode_order", "fft_row_major"},
            {"dims", torus.dims()},
            {"periods", torus.periods()},
            {"resolution", torus.resolution()},
            {"components", components},
            {"fields", fields}};
}

void dump_fields(std::ostream& out, const std::vector<const Field*>& fields) {
    for (const Field* f : fields)
        for (const Complex& c : f->data()) {
            put_f64(out, c.real());
            put_f64(out, c.imag());
        }
}

void write_json(const std::filesystem::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

std::filesystem::path manifest_path(const std::filesystem::path& path) {
    return std::filesystem::path(path.string() + ".json");
}

json obstruction_json(const Obstruction& o) {
    json modes = json::array();
    for (const auto& m : o.modes) {
        modes.push_back({{"mode", m.mode}, {"magnitude", m.magnitude}, {"rhs_magnitude", m.rhs_magnitude}});
    }
    return {{"kind", o.kind == ObstructionKind::SingularModes ? "singular_modes" : "near_singular"},
            {"threshold", o.threshold},
            {"modes", modes},
            {"kernel_dimension", o.kernel_basis.size()}};
}

}  // namespace

std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return {buf.data(), res.ptr};
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    auto out = open_out(path, true);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw DimensionMismatch("CSV row width differs from header");
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

void write_field_csv(const std::filesystem::path& path, const Field& f) {
    const auto& torus = f.torus();
    std::vector<std::string> header;
    for (int a = 0; a < torus.dims(); ++a) header.push_back("x" + std::to_string(a));
    if (f.components() == 1) {
        header.emplace_back("u");
    } else {
        for (int c = 0; c < f.components(); ++c) header.push_back("u" + std::to_string(c));
    }
    std::vector<std::vector<double>> samples;
    for (int c = 0; c < f.components(); ++c) samples.push_back(f.samples(c));
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < torus.size(); ++i) {
        auto row = torus.point(i);
        for (const auto& s : samples) row.push_back(s[i]);
        rows.push_back(std::move(row));
    }
    write_csv(path, header, rows);
}

void write_coefficients(const std::filesystem::path& path, const Field& f) {
    auto out = open_out(path, true);
    dump_fields(out, {&f});
    write_json(manifest_path(path), layout_json(f.torus(), f.components(), 1));
}

Field read_coefficients(const std::filesystem::path& path) {
    std::ifstream manifest_in(manifest_path(path));
    if (!manifest_in) throw ValidationError("missing manifest " + manifest_path(path).string());
    json manifest;
    try {
        manifest = json::parse(manifest_in);
    } catch (const json::exception& e) {
        throw ValidationError("bad manifest " + manifest_path(path).string() + ": " + e.what());
    }
    if (manifest.value("format", "") != "horizonwave-coefficients" || manifest.value("version", 0) != 1) {
        throw ValidationError("unsupported coefficient manifest");
    }
    const SpatialTorus torus(manifest.at("periods").get<std::vector<double>>(),
                             manifest.at("resolution").get<std::vector<int>>());
    const int components = manifest.at("components").get<int>();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::vector<Complex> coeffs(torus.size() * static_cast<std::size_t>(components));
    for (auto& c : coeffs) {
        const double re = get_f64(in);
        const double im = get_f64(in);
        c = {re, im};
    }
    return Field::from_coefficients(torus, components, std::move(coeffs));
}

void write_jet(const std::filesystem::path& path, const AsymptoticSolution& w) {
    auto out = open_out(path, true);
    std::vector<const Field*> fields;
    for (const auto& j : w.jets) fields.push_back(&j);
    dump_fields(out, fields);

    const auto& torus = w.jets.front().torus();
    json manifest = layout_json(torus, w.jets.front().components(), w.jets.size());
    manifest["content"] = "jet";
    manifest["operator"] = w.op.label;
    manifest["order"] = w.order;
    manifest["residuals"] = residual_order_check(w);
    json orders = json::array();
    for (const auto& r : w.orders) {
        json entry{{"k", r.k}, {"cokernel_violation", r.cokernel_violation},
                   {"unsolvable_norm", r.unsolvable_norm}};
        if (r.obstruction) entry["obstruction"] = obstruction_json(*r.obstruction);
        if (r.near_singular) entry["near_singular"] = obstruction_json(*r.near_singular);
        orders.push_back(std::move(entry));
    }
    manifest["orders"] = std::move(orders);
    write_json(manifest_path(path), manifest);
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, int m) {
    std::vector<std::vector<double>> rows;
    const double s = 2.0 * m;
    if (traj.snapshots.empty()) {
        for (const auto& n : traj.nodes) rows.push_back({n.t, sobolev_norm(n.u, s), sobolev_norm(n.ut, s)});
    } else {
        for (const auto& st : traj.snapshots) rows.push_back({st.t, sobolev_norm(st.u, s), sobolev_norm(st.ut, s)});
    }
    const std::string suffix = "_" + std::to_string(2 * m);
    write_csv(path, {"t", "u_norm" + suffix, "ut_norm" + suffix}, rows);
}

void write_energy_csv(const std::filesystem::path& path, const std::vector<EnergyRow>& rows) {
    std::vector<std::vector<double>> out;
    for (const auto& r : rows) {
        out.push_back({r.t, r.terms[0], r.terms[1], r.terms[2], r.terms[3], r.terms[4], r.total, r.companion});
    }
    write_csv(path,
              {"t", "z_term", "psi_transversal", "psi_ut", "transversal", "u_term", "total", "companion"},
              out);
}

}  // namespace horizonwave::io
