#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fermiblock/oracle.hpp"
#include "fermiblock/types.hpp"

namespace fermiblock {

enum class Boundary { open, periodic };

/// Axis-aligned rectangular region, inclusive corners.
struct Domain {
    std::string label;
    std::vector<std::int64_t> lo, hi;
};

struct DisorderSpec {
    std::uint64_t key = 0;
    std::string domain;       // D*: domain carrying onsite disorder
    double amplitude = 0.0;   // W: values uniform in [-W, W]
};

/// One hopping amplitude: g(o1, o2, D(x), D(x+t), t). The builder
/// canonicalizes orientation, so either direction of a hop may be given.
struct HopEntry {
    int o1 = 0, o2 = 0;
    std::string dom_from, dom_to;
    std::vector<std::int64_t> displacement;
    cplx amplitude;
};

struct LatticeSpec {
    std::vector<std::int64_t> dims;
    Boundary boundary = Boundary::open;
    int orbitals = 1;
    std::vector<Domain> domains;   // empty: one full-lattice domain "bulk"
    std::vector<HopEntry> hops;
    std::optional<DisorderSpec> disorder;

    LatticeSpec& hop(int o1, int o2, std::string dom_from, std::string dom_to,
                     std::vector<std::int64_t> t, cplx amp) {
        hops.push_back({o1, o2, std::move(dom_from), std::move(dom_to), std::move(t), amp});
        return *this;
    }

    std::int64_t n_sites() const {
        std::int64_t p = 1;
        for (auto d : dims) p *= d;
        return p;
    }
    std::int64_t n_modes() const { return n_sites() * orbitals; }

    /// Maximal hop length (Manhattan) over the table.
    int range() const;
};

/// Geometry helpers shared by the oracle closures and the experiment code.
class LatticeGeometry {
public:
    LatticeGeometry() = default;
    LatticeGeometry(std::vector<std::int64_t> dims, int orbitals, Boundary boundary);

    Index mode_index(std::span<const std::int64_t> coords, int orbital) const;
    std::vector<std::int64_t> coords_of(Index mode) const;
    int orbital_of(Index mode) const { return static_cast<int>(mode % orbitals_); }
    std::int64_t site_of(Index mode) const { return static_cast<std::int64_t>(mode) / orbitals_; }

    /// Shifted coordinates, wrapped if periodic; nullopt if the hop leaves an
    /// open lattice.
    std::optional<std::vector<std::int64_t>> shift(std::span<const std::int64_t> coords,
                                                   std::span<const std::int64_t> t) const;

    std::int64_t n_sites() const;
    std::int64_t n_modes() const { return n_sites() * orbitals_; }
    const std::vector<std::int64_t>& dims() const { return dims_; }
    int orbitals() const { return orbitals_; }
    Boundary boundary() const { return boundary_; }

private:
    std::vector<std::int64_t> dims_;
    int orbitals_ = 1;
    Boundary boundary_ = Boundary::open;
};

/// Single-particle matrix of the tight-binding Hamiltonian as a sparse
/// oracle. Mode count is padded to the next power of two with decoupled
/// zero rows. Throws on overlapping domains, |amplitude| > 1, or ambiguous
/// duplicate hop entries.
OracleTuple build_tight_binding(const LatticeSpec& spec);

/// Quenched onsite disorder value for a site: deterministic in (key, coords),
/// uniform in [-W, W).
double disorder_value(std::uint64_t key, std::span<const std::int64_t> coords, double amplitude);

/// Parse a LatticeSpec from its key-value text format (see README).
LatticeSpec parse_lattice_spec(const std::string& text);

}  // namespace fermiblock
