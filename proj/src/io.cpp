#include "fracns/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fracns/harness.hpp"

namespace fracns {

namespace {
constexpr char kMagic[4] = {'F', 'N', 'S', '1'};

void append_double(std::string& s, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    s += buf;
}
}  // namespace

void write_field_snapshot(const SpectralField& u, const std::string& path) {
    std::string blob;
    blob.reserve(24 + u.size() * sizeof(Complex));
    blob.append(kMagic, 4);
    const std::uint32_t n = static_cast<std::uint32_t>(u.grid().n);
    blob.append(reinterpret_cast<const char*>(&n), 4);
    const double frac = u.grid().dealias_fraction;
    blob.append(reinterpret_cast<const char*>(&frac), 8);
    const std::uint8_t divfree = u.divergence_free() ? 1 : 0;
    const std::uint8_t norm_id = 0;  // (2pi)^3 Plancherel
    const std::uint16_t reserved = 0;
    blob.append(reinterpret_cast<const char*>(&divfree), 1);
    blob.append(reinterpret_cast<const char*>(&norm_id), 1);
    blob.append(reinterpret_cast<const char*>(&reserved), 2);
    // Row-major triples: (c0, c1, c2) per mode.
    for (std::size_t idx = 0; idx < u.grid().modes(); ++idx)
        for (int c = 0; c < 3; ++c) {
            const Complex z = u.at(c, idx);
            const double re = z.real(), im = z.imag();
            blob.append(reinterpret_cast<const char*>(&re), 8);
            blob.append(reinterpret_cast<const char*>(&im), 8);
        }
    atomic_write(path, blob);
}

SpectralField read_field_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_field_snapshot: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("read_field_snapshot: bad magic in " + path);
    std::uint32_t n = 0;
    double frac = 0.0;
    std::uint8_t divfree = 0, norm_id = 0;
    std::uint16_t reserved = 0;
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&frac), 8);
    in.read(reinterpret_cast<char*>(&divfree), 1);
    in.read(reinterpret_cast<char*>(&norm_id), 1);
    in.read(reinterpret_cast<char*>(&reserved), 2);
    if (!in || norm_id != 0)
        throw std::runtime_error("read_field_snapshot: unsupported header in " + path);
    SpectralField u(GridSpec{static_cast<int>(n), frac}, divfree != 0);
    for (std::size_t idx = 0; idx < u.grid().modes(); ++idx)
        for (int c = 0; c < 3; ++c) {
            double re = 0.0, im = 0.0;
            in.read(reinterpret_cast<char*>(&re), 8);
            in.read(reinterpret_cast<char*>(&im), 8);
            u.at(c, idx) = Complex{re, im};
        }
    if (!in) throw std::runtime_error("read_field_snapshot: truncated file " + path);
    return u;
}

std::string field_debug_json(const SpectralField& u) {
    nlohmann::json j;
    j["schema"] = "fracns-field/1";
    j["grid"] = {{"n", u.grid().n}, {"dealias_fraction", u.grid().dealias_fraction}};
    j["divergence_free"] = u.divergence_free();
    j["norm_convention"] = "plancherel-2pi3";
    nlohmann::json coeffs = nlohmann::json::array();
    for (std::size_t idx = 0; idx < u.grid().modes(); ++idx) {
        nlohmann::json triple = nlohmann::json::array();
        for (int c = 0; c < 3; ++c) {
            triple.push_back(u.at(c, idx).real());
            triple.push_back(u.at(c, idx).imag());
        }
        coeffs.push_back(std::move(triple));
    }
    j["coeffs"] = std::move(coeffs);
    return j.dump();
}

std::string trajectory_csv(const TrajectoryReport& rep) {
    std::string out = "t,energy,dissipation_integral";
    for (double s : rep.record_orders) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), ",H%g", s);
        out += buf;
    }
    out += "\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        append_double(out, rep.times[i]);
        out += ",";
        append_double(out, rep.energy[i]);
        out += ",";
        append_double(out, rep.dissipation_integral[i]);
        for (std::size_t c = 0; c < rep.record_orders.size(); ++c) {
            out += ",";
            append_double(out, rep.sobolev_norms[c][i]);
        }
        out += "\n";
    }
    return out;
}

std::string trajectory_json(const TrajectoryReport& rep) {
    nlohmann::json j;
    j["schema"] = "fracns-trajectory/1";
    j["status"] = to_string(rep.status);
    j["params"] = {{"alpha", rep.alpha},
                   {"mollifier_eps", rep.mollifier_eps},
                   {"dt_used", rep.dt_used}};
    j["grid"] = {{"n", rep.grid_n}, {"dealias_fraction", rep.dealias_fraction}};
    j["series"]["t"] = rep.times;
    j["series"]["energy"] = rep.energy;
    j["series"]["dissipation_rate"] = rep.dissipation_rate;
    j["series"]["dissipation_integral"] = rep.dissipation_integral;
    for (std::size_t c = 0; c < rep.record_orders.size(); ++c) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", rep.record_orders[c]);
        j["series"]["sobolev"][buf] = rep.sobolev_norms[c];
    }
    return j.dump(2);
}

std::string stability_csv(const StabilityReport& rep) {
    std::string out = "t,f,bound\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        append_double(out, rep.times[i]);
        out += ",";
        append_double(out, rep.f_series[i]);
        out += ",";
        append_double(out, rep.bound_series[i]);
        out += "\n";
    }
    return out;
}

void atomic_write(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("atomic_write: short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace fracns
