#include "catcomm/qsim.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "catcomm/rng.hpp"

namespace catcomm {

namespace {
constexpr int kFloatingQubitLimit = 20;
}

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::Shared: return "shared";
        case Stage::Phased: return "phased";
        case Stage::Rotated: return "rotated";
        case Stage::Measured: return "measured";
    }
    return "?";
}

CatRegister::CatRegister(int k, int n, Backend backend)
    : k_(k), n_(n), backend_(backend) {
    if (k < 2) throw std::invalid_argument("CatRegister: need k >= 2 parties");
    if (n < 1 || n > 62) throw std::invalid_argument("CatRegister: n out of range");
    if (backend != Backend::Exact) {
        if (k > kFloatingQubitLimit)
            throw std::invalid_argument("CatRegister: floating backend limited to k <= 20");
        std::vector<std::complex<double>> amps(std::size_t{1} << k, 0.0);
        const double r = 1.0 / std::sqrt(2.0);
        amps.front() = r;
        amps.back() = r;
        amplitudes_ = std::move(amps);
    }
}

CatRegister make_cat_state(int k, int n, Backend backend) { return CatRegister(k, n, backend); }

CatRegister& CatRegister::apply_phase(int party, std::uint64_t x) {
    if (stage_ != Stage::Shared && stage_ != Stage::Phased)
        throw StageError("apply_phase: register already rotated or measured");
    if (party < 1 || party > k_) throw std::out_of_range("apply_phase: party index");
    const std::uint64_t modulus = std::uint64_t{1} << n_;
    if (x >= modulus) throw std::out_of_range("apply_phase: x outside [0, 2^n-1]");
    phase_ = (phase_ + x) % modulus;
    if (has_floating()) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(x) /
                             static_cast<double>(modulus);
        const std::complex<double> rot(std::cos(angle), std::sin(angle));
        auto& amps = *amplitudes_;
        const std::uint64_t bit = std::uint64_t{1} << (party - 1);
        for (std::uint64_t idx = 0; idx < amps.size(); ++idx)
            if (idx & bit) amps[idx] *= rot;
    }
    stage_ = Stage::Phased;
    return *this;
}

int CatRegister::exact_parity() const {
    const std::uint64_t half = std::uint64_t{1} << (n_ - 1);
    if (phase_ == 0) return 0;
    if (phase_ == half) return 1;
    throw PromiseViolation(
        "exact backend: accumulated phase is not 0 or 2^(n-1); "
        "use the floating backend for promise-violating inputs");
}

CatRegister& CatRegister::apply_hadamard_all() {
    if (stage_ != Stage::Phased)
        throw StageError("apply_hadamard_all: register must be in the phased stage");
    if (has_exact()) {
        (void)exact_parity(); // refuse early when the closed form does not apply
    }
    if (has_floating()) {
        auto& amps = *amplitudes_;
        const double r = 1.0 / std::sqrt(2.0);
        for (int q = 0; q < k_; ++q) {
            const std::uint64_t bit = std::uint64_t{1} << q;
            for (std::uint64_t idx = 0; idx < amps.size(); ++idx) {
                if (idx & bit) continue;
                const auto a0 = amps[idx];
                const auto a1 = amps[idx | bit];
                amps[idx] = (a0 + a1) * r;
                amps[idx | bit] = (a0 - a1) * r;
            }
        }
    }
    stage_ = Stage::Rotated;
    return *this;
}

MeasurementRecord CatRegister::measure(std::uint64_t seed, int pivot_party) {
    if (stage_ != Stage::Rotated) throw StageError("measure: register must be rotated first");
    if (pivot_party == -1) pivot_party = k_;
    if (pivot_party < 1 || pivot_party > k_) throw std::out_of_range("measure: pivot party");
    MeasurementRecord rec;
    rec.seed = seed;
    rec.bits.assign(static_cast<std::size_t>(k_), 0);
    Rng rng(seed);
    if (has_exact()) {
        const int parity = exact_parity();
        int acc = 0;
        for (int p = 1; p <= k_; ++p) {
            if (p == pivot_party) continue;
            const int b = rng.next_bit();
            rec.bits[static_cast<std::size_t>(p - 1)] = static_cast<std::uint8_t>(b);
            acc ^= b;
        }
        rec.bits[static_cast<std::size_t>(pivot_party - 1)] =
            static_cast<std::uint8_t>(parity ^ acc);
    } else {
        const auto dist = floating_outcome_distribution();
        const double u = rng.unit();
        double cum = 0.0;
        std::uint64_t outcome = dist.size() - 1;
        for (std::uint64_t idx = 0; idx < dist.size(); ++idx) {
            cum += dist[idx];
            if (u < cum) {
                outcome = idx;
                break;
            }
        }
        for (int p = 1; p <= k_; ++p)
            rec.bits[static_cast<std::size_t>(p - 1)] =
                static_cast<std::uint8_t>((outcome >> (p - 1)) & 1);
    }
    stage_ = Stage::Measured;
    return rec;
}

std::vector<double> CatRegister::exact_outcome_distribution() const {
    if (stage_ != Stage::Rotated)
        throw StageError("exact_outcome_distribution: register must be rotated");
    if (!has_exact()) throw std::logic_error("exact_outcome_distribution: floating-only register");
    if (k_ > kFloatingQubitLimit)
        throw BudgetExceeded("exact_outcome_distribution: 2^k table too large");
    const int parity = exact_parity();
    std::vector<double> dist(std::size_t{1} << k_, 0.0);
    const double p = std::ldexp(1.0, 1 - k_); // uniform over the 2^(k-1) matching strings
    for (std::uint64_t idx = 0; idx < dist.size(); ++idx)
        if ((std::popcount(idx) & 1) == parity) dist[idx] = p;
    return dist;
}

std::vector<double> CatRegister::floating_outcome_distribution() const {
    if (stage_ != Stage::Rotated)
        throw StageError("floating_outcome_distribution: register must be rotated");
    if (!has_floating())
        throw std::logic_error("floating_outcome_distribution: no amplitude vector");
    const auto& amps = *amplitudes_;
    std::vector<double> dist(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) dist[i] = std::norm(amps[i]);
    return dist;
}

double CatRegister::norm() const {
    if (!has_floating()) throw std::logic_error("norm: no amplitude vector");
    double s = 0.0;
    for (const auto& a : *amplitudes_) s += std::norm(a);
    return std::sqrt(s);
}

nlohmann::ordered_json CatRegister::dump() const {
    nlohmann::ordered_json j;
    j["k"] = k_;
    j["n"] = n_;
    j["stage"] = stage_name(stage_);
    j["accumulated_phase"] = phase_;
    if (has_floating()) {
        nlohmann::ordered_json amps = nlohmann::ordered_json::array();
        for (const auto& a : *amplitudes_) amps.push_back({a.real(), a.imag()});
        j["amplitudes"] = std::move(amps);
    }
    return j;
}

} // namespace catcomm
