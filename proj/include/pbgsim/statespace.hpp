#pragma once

// Fixed-excitation sectors of (two-level atom) x (defect mode) x (N discrete
// reservoir modes), and complex amplitude vectors over them.
//
// Block ordering of a sector (each block present only when applicable):
//
//   p = 1:            |e,0>   [|g,1_d>]   |g,1_j>  j = 1..N
//   p = 2, defect:    |e,1_d,0>  |g,2_d,0>  |g,1_d,1_j>  |e,0,1_j>  |g,0,1_j,1_k> (j <= k)
//   p = 2, no defect: |e,1_j>  |g,1_j,1_k> (j <= k)
//
// Pairs are stored once per unordered (j, k), row-major in j.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pbgsim/errors.hpp"

namespace pbgsim {

using cplx = std::complex<double>;

enum class Atom : std::uint8_t { ground, excited };

/// Physical label of a basis ket. Reservoir modes are 1-based and listed once
/// per photon, sorted ascending (|1_j,1_j> -> {j, j}).
struct BasisState {
    Atom atom = Atom::ground;
    int defect = 0;
    std::vector<std::size_t> photons;

    static BasisState make(Atom atom, int defect,
                           std::vector<std::size_t> modes = {}) {
        std::sort(modes.begin(), modes.end());
        return {atom, defect, std::move(modes)};
    }

    int excitations() const {
        return (atom == Atom::excited ? 1 : 0) + defect +
               static_cast<int>(photons.size());
    }

    friend bool operator==(const BasisState&, const BasisState&) = default;
};

std::string to_string(const BasisState& s);

class ExcitationBasis {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    int p() const { return p_; }
    std::size_t n_modes() const { return n_modes_; }
    bool has_defect() const { return has_defect_; }
    std::size_t size() const { return size_; }

    // Block offsets, npos when the block is absent.
    std::size_t atom_only() const { return atom_only_; }        // a0
    std::size_t defect_only() const { return defect_only_; }    // b0
    std::size_t ground_single() const { return ground_single_; }  // b_j
    std::size_t excited_single() const { return excited_single_; }  // a_j (p=2)
    std::size_t pairs() const { return pairs_; }                // b_jk (p=2)

    /// Offset of the unordered pair (j, k), 0-based, inside the pair block.
    std::size_t pair_offset(std::size_t j, std::size_t k) const {
        if (j > k) std::swap(j, k);
        return j * (2 * n_modes_ - j + 1) / 2 + (k - j);
    }

    std::size_t index_of(const BasisState& s) const;
    BasisState state_of(std::size_t i) const;

    /// Per-index tallies used by the observables.
    bool atom_excited(std::size_t i) const { return atom_excited_[i] != 0; }
    int defect_photons(std::size_t i) const { return defect_count_[i]; }
    int reservoir_photons(std::size_t i) const { return reservoir_count_[i]; }

    friend ExcitationBasis build_basis(int p, std::size_t n_modes,
                                       bool has_defect);

private:
    ExcitationBasis() = default;
    void fill_tallies();

    int p_ = 0;
    std::size_t n_modes_ = 0;
    bool has_defect_ = false;
    std::size_t size_ = 0;
    std::size_t atom_only_ = npos;
    std::size_t defect_only_ = npos;
    std::size_t ground_single_ = npos;
    std::size_t excited_single_ = npos;
    std::size_t pairs_ = npos;
    std::vector<std::uint8_t> atom_excited_;
    std::vector<std::uint8_t> defect_count_;
    std::vector<std::uint8_t> reservoir_count_;
};

inline ExcitationBasis build_basis(int p, std::size_t n_modes,
                                   bool has_defect) {
    if (p > 2)
        throw UnsupportedSectorError(
            "sectors with more than two excitations are not supported");
    if (p < 1) throw DomainError("build_basis: p must be 1 or 2");
    if (n_modes < 1) throw DomainError("build_basis: need at least one mode");

    ExcitationBasis b;
    b.p_ = p;
    b.n_modes_ = n_modes;
    b.has_defect_ = has_defect;
    std::size_t next = 0;
    if (p == 1) {
        b.atom_only_ = next++;
        if (has_defect) b.defect_only_ = next++;
        b.ground_single_ = next;
        next += n_modes;
    } else {
        if (has_defect) {
            b.atom_only_ = next++;
            b.defect_only_ = next++;
            b.ground_single_ = next;
            next += n_modes;
        }
        b.excited_single_ = next;
        next += n_modes;
        b.pairs_ = next;
        next += n_modes * (n_modes + 1) / 2;
    }
    b.size_ = next;
    b.fill_tallies();
    return b;
}

inline void ExcitationBasis::fill_tallies() {
    atom_excited_.assign(size_, 0);
    defect_count_.assign(size_, 0);
    reservoir_count_.assign(size_, 0);
    auto fill = [&](std::size_t from, std::size_t count, bool excited,
                    int defect, int photons) {
        if (from == npos) return;
        for (std::size_t i = from; i < from + count; ++i) {
            atom_excited_[i] = excited;
            defect_count_[i] = static_cast<std::uint8_t>(defect);
            reservoir_count_[i] = static_cast<std::uint8_t>(photons);
        }
    };
    const int d = has_defect_ ? p_ - 1 : 0;  // defect photons beside a0
    fill(atom_only_, 1, true, d, 0);
    fill(defect_only_, 1, false, p_, 0);
    fill(ground_single_, n_modes_, false, p_ - 1, 1);
    fill(excited_single_, n_modes_, true, 0, 1);
    fill(pairs_, n_modes_ * (n_modes_ + 1) / 2, false, 0, 2);
}

inline std::size_t ExcitationBasis::index_of(const BasisState& s) const {
    auto fail = [&]() -> std::size_t {
        throw LookupError("state " + to_string(s) + " is not in the sector");
    };
    if (s.excitations() != p_ || s.defect < 0) return fail();
    if (s.defect > 0 && !has_defect_) return fail();
    for (std::size_t m : s.photons)
        if (m < 1 || m > n_modes_) return fail();
    const bool e = s.atom == Atom::excited;
    std::vector<std::size_t> ph = s.photons;
    std::sort(ph.begin(), ph.end());
    switch (ph.size()) {
        case 0:
            if (e) return atom_only_ != npos ? atom_only_ : fail();
            return defect_only_ != npos ? defect_only_ : fail();
        case 1:
            if (e) return excited_single_ != npos ? excited_single_ + ph[0] - 1 : fail();
            return ground_single_ + ph[0] - 1;
        case 2:
            return pairs_ + pair_offset(ph[0] - 1, ph[1] - 1);
        default:
            return fail();
    }
}

inline BasisState ExcitationBasis::state_of(std::size_t i) const {
    if (i >= size_)
        throw LookupError("index " + std::to_string(i) + " outside basis of size " +
                          std::to_string(size_));
    const int d = defect_count_[i];
    const Atom a = atom_excited_[i] ? Atom::excited : Atom::ground;
    switch (reservoir_count_[i]) {
        case 0:
            return BasisState::make(a, d);
        case 1: {
            const std::size_t from =
                atom_excited_[i] ? excited_single_ : ground_single_;
            return BasisState::make(a, d, {i - from + 1});
        }
        default: {
            std::size_t off = i - pairs_;
            std::size_t j = 0;
            while (off >= n_modes_ - j) {
                off -= n_modes_ - j;
                ++j;
            }
            return BasisState::make(a, d, {j + 1, j + off + 1});
        }
    }
}

inline std::string to_string(const BasisState& s) {
    std::string out = "|";
    out += s.atom == Atom::excited ? "e" : "g";
    out += ",d=" + std::to_string(s.defect);
    for (std::size_t m : s.photons) out += ",1_" + std::to_string(m);
    return out + ">";
}

/// Complex amplitudes aligned with an ExcitationBasis.
struct StateVector {
    std::vector<cplx> amplitudes;

    StateVector() = default;
    explicit StateVector(std::size_t n) : amplitudes(n) {}
    explicit StateVector(std::vector<cplx> a) : amplitudes(std::move(a)) {}

    std::size_t size() const { return amplitudes.size(); }
    cplx& operator[](std::size_t i) { return amplitudes[i]; }
    const cplx& operator[](std::size_t i) const { return amplitudes[i]; }
    std::span<const cplx> view() const { return amplitudes; }
    std::span<cplx> view() { return amplitudes; }
};

namespace initial {
struct AtomExcited {};
struct AtomExcitedDefectLoaded {};
struct Custom {
    std::vector<std::pair<BasisState, cplx>> terms;
};
}  // namespace initial

using InitialCondition = std::variant<initial::AtomExcited,
                                      initial::AtomExcitedDefectLoaded,
                                      initial::Custom>;

inline StateVector initial_state(const ExcitationBasis& basis,
                                 const InitialCondition& which) {
    StateVector psi(basis.size());
    if (std::holds_alternative<initial::AtomExcited>(which)) {
        if (basis.p() != 1)
            throw DomainError("AtomExcited initial state lives in the p=1 sector");
        psi[basis.atom_only()] = 1.0;
    } else if (std::holds_alternative<initial::AtomExcitedDefectLoaded>(which)) {
        if (basis.p() != 2 || !basis.has_defect())
            throw DomainError(
                "AtomExcitedDefectLoaded needs the p=2 sector with a defect mode");
        psi[basis.atom_only()] = 1.0;
    } else {
        const auto& custom = std::get<initial::Custom>(which);
        double norm = 0.0;
        for (const auto& [s, amp] : custom.terms) psi[basis.index_of(s)] += amp;
        for (const cplx& a : psi.amplitudes) norm += std::norm(a);
        if (!(norm > 0.0))
            throw DomainError("custom initial state has zero norm");
        const double scale = 1.0 / std::sqrt(norm);
        for (cplx& a : psi.amplitudes) a *= scale;
    }
    return psi;
}

}  // namespace pbgsim
