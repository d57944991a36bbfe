#include "fermiblock/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "fermiblock/rng.hpp"

namespace fermiblock {

namespace {

int manhattan(std::span<const std::int64_t> t) {
    std::int64_t m = 0;
    for (auto c : t) m += std::llabs(c);
    return static_cast<int>(m);
}

bool lex_positive(std::span<const std::int64_t> t) {
    for (auto c : t) {
        if (c > 0) return true;
        if (c < 0) return false;
    }
    return false;  // all zero
}

bool all_zero(std::span<const std::int64_t> t) {
    return std::all_of(t.begin(), t.end(), [](std::int64_t c) { return c == 0; });
}

std::vector<std::int64_t> negate(const std::vector<std::int64_t>& t) {
    std::vector<std::int64_t> r(t.size());
    for (size_t k = 0; k < t.size(); ++k) r[k] = -t[k];
    return r;
}

}  // namespace

int LatticeSpec::range() const {
    int l = 0;
    for (const auto& h : hops) l = std::max(l, manhattan(h.displacement));
    return l;
}

LatticeGeometry::LatticeGeometry(std::vector<std::int64_t> dims, int orbitals, Boundary boundary)
    : dims_(std::move(dims)), orbitals_(orbitals), boundary_(boundary) {}

std::int64_t LatticeGeometry::n_sites() const {
    std::int64_t p = 1;
    for (auto d : dims_) p *= d;
    return p;
}

Index LatticeGeometry::mode_index(std::span<const std::int64_t> coords, int orbital) const {
    std::int64_t site = 0;
    for (size_t a = 0; a < dims_.size(); ++a) site = site * dims_[a] + coords[a];
    return static_cast<Index>(site * orbitals_ + orbital);
}

std::vector<std::int64_t> LatticeGeometry::coords_of(Index mode) const {
    std::int64_t site = static_cast<std::int64_t>(mode) / orbitals_;
    std::vector<std::int64_t> c(dims_.size());
    for (size_t a = dims_.size(); a-- > 0;) {
        c[a] = site % dims_[a];
        site /= dims_[a];
    }
    return c;
}

std::optional<std::vector<std::int64_t>> LatticeGeometry::shift(
    std::span<const std::int64_t> coords, std::span<const std::int64_t> t) const {
    std::vector<std::int64_t> r(coords.begin(), coords.end());
    for (size_t a = 0; a < dims_.size(); ++a) {
        r[a] += t[a];
        if (boundary_ == Boundary::periodic) {
            r[a] %= dims_[a];
            if (r[a] < 0) r[a] += dims_[a];
        } else if (r[a] < 0 || r[a] >= dims_[a]) {
            return std::nullopt;
        }
    }
    return r;
}

namespace {

// Hop table entry after orientation canonicalization: displacement is
// lexicographically positive, or zero with o1 <= o2.
struct CanonicalHop {
    int o1, o2;
    std::string dom_from, dom_to;
    std::vector<std::int64_t> t;
    cplx amp;
};

struct LatticeModel {
    LatticeGeometry geom;
    std::vector<Domain> domains;
    std::vector<CanonicalHop> hops;
    std::optional<DisorderSpec> disorder;
    int disorder_domain = -1;

    // domain index containing coords, or -1
    int domain_of(std::span<const std::int64_t> coords) const {
        for (size_t d = 0; d < domains.size(); ++d) {
            bool in = true;
            for (size_t a = 0; a < coords.size(); ++a)
                if (coords[a] < domains[d].lo[a] || coords[a] > domains[d].hi[a]) {
                    in = false;
                    break;
                }
            if (in) return static_cast<int>(d);
        }
        return -1;
    }

    cplx entry(Index i, Index j) const {
        const Index n_modes = static_cast<Index>(geom.n_modes());
        if (i >= n_modes || j >= n_modes) return 0.0;
        const auto x = geom.coords_of(i);
        const auto y = geom.coords_of(j);
        const int oi = geom.orbital_of(i), oj = geom.orbital_of(j);
        const int dx = domain_of(x), dy = domain_of(y);
        if (dx < 0 || dy < 0) return 0.0;

        const bool same_site = geom.site_of(i) == geom.site_of(j);
        if (same_site && disorder && dx == disorder_domain) {
            // onsite values in D* are replaced by the keyed PRF
            if (oi != oj) return 0.0;
            return disorder_value(disorder->key, x, disorder->amplitude);
        }

        cplx acc = 0.0;
        for (const auto& h : hops) {
            const bool diag = all_zero(h.t) && h.o1 == h.o2;
            // forward: this pair realizes h_{(x,o1),(x+t,o2)}
            if (h.o1 == oi && h.o2 == oj && h.dom_from == domains[dx].label &&
                h.dom_to == domains[dy].label) {
                auto tgt = geom.shift(x, h.t);
                if (tgt && *tgt == y) acc += h.amp;
            }
            if (diag) continue;  // self-conjugate term counted once
            // mirror: this pair realizes conj(h_{(y,o1),(y+t,o2)})
            if (h.o1 == oj && h.o2 == oi && h.dom_from == domains[dy].label &&
                h.dom_to == domains[dx].label) {
                auto tgt = geom.shift(y, h.t);
                if (tgt && *tgt == x) acc += std::conj(h.amp);
            }
        }
        return acc;
    }

    std::vector<Index> row(Index i) const {
        const Index n_modes = static_cast<Index>(geom.n_modes());
        if (i >= n_modes) return {};
        const auto x = geom.coords_of(i);
        const int oi = geom.orbital_of(i);
        std::set<Index> cand{i};
        for (const auto& h : hops) {
            if (h.o1 == oi)
                if (auto tgt = geom.shift(x, h.t))
                    cand.insert(geom.mode_index(*tgt, h.o2));
            if (h.o2 == oi)
                if (auto tgt = geom.shift(x, negate(h.t)))
                    cand.insert(geom.mode_index(*tgt, h.o1));
        }
        std::vector<Index> out;
        for (Index j : cand)
            if (entry(i, j) != cplx{0.0, 0.0}) out.push_back(j);
        return out;
    }
};

void validate_spec(const LatticeSpec& spec, const std::vector<Domain>& domains) {
    if (spec.dims.empty()) throw std::invalid_argument("lattice: dims must be non-empty");
    for (auto d : spec.dims)
        if (d < 1) throw std::invalid_argument("lattice: dims must be >= 1");
    if (spec.orbitals < 1) throw std::invalid_argument("lattice: orbitals must be >= 1");
    const int l = spec.range();
    if (spec.boundary == Boundary::periodic)
        for (auto d : spec.dims)
            if (d <= l)
                throw std::invalid_argument(
                    "lattice: periodic side lengths must exceed the hop range");

    std::set<std::string> labels;
    for (const auto& dom : domains) {
        if (dom.label.empty()) throw std::invalid_argument("lattice: empty domain label");
        if (!labels.insert(dom.label).second)
            throw std::invalid_argument("lattice: duplicate domain label " + dom.label);
        if (dom.lo.size() != spec.dims.size() || dom.hi.size() != spec.dims.size())
            throw std::invalid_argument("lattice: domain arity mismatch for " + dom.label);
        for (size_t a = 0; a < spec.dims.size(); ++a)
            if (dom.lo[a] < 0 || dom.hi[a] >= spec.dims[a] || dom.lo[a] > dom.hi[a])
                throw std::invalid_argument("lattice: domain " + dom.label + " outside lattice");
    }
    for (size_t p = 0; p < domains.size(); ++p)
        for (size_t q = p + 1; q < domains.size(); ++q) {
            bool overlap = true;
            for (size_t a = 0; a < spec.dims.size(); ++a)
                if (domains[p].hi[a] < domains[q].lo[a] || domains[q].hi[a] < domains[p].lo[a]) {
                    overlap = false;
                    break;
                }
            if (overlap)
                throw std::invalid_argument("lattice: overlapping domains " + domains[p].label +
                                            ", " + domains[q].label);
        }

    for (const auto& h : spec.hops) {
        if (h.displacement.size() != spec.dims.size())
            throw std::invalid_argument("lattice: hop displacement arity mismatch");
        if (std::abs(h.amplitude) > 1.0 + 1e-12)
            throw std::invalid_argument("lattice: |hop amplitude| > 1");
        if (h.o1 < 0 || h.o1 >= spec.orbitals || h.o2 < 0 || h.o2 >= spec.orbitals)
            throw std::invalid_argument("lattice: hop orbital out of range");
        if (!labels.count(h.dom_from) || !labels.count(h.dom_to))
            throw std::invalid_argument("lattice: hop references unknown domain");
    }
    if (spec.disorder) {
        if (!labels.count(spec.disorder->domain))
            throw std::invalid_argument("lattice: disorder references unknown domain");
        if (spec.disorder->amplitude < 0.0 || spec.disorder->amplitude > 1.0)
            throw std::invalid_argument("lattice: disorder amplitude must be in [0, 1]");
    }
}

std::vector<CanonicalHop> canonicalize_hops(const LatticeSpec& spec) {
    using Key = std::tuple<int, int, std::string, std::string, std::vector<std::int64_t>>;
    std::map<Key, cplx> table;
    for (const auto& h : spec.hops) {
        int o1 = h.o1, o2 = h.o2;
        std::string d1 = h.dom_from, d2 = h.dom_to;
        std::vector<std::int64_t> t = h.displacement;
        cplx amp = h.amplitude;
        if (all_zero(t)) {
            if (d1 != d2)
                throw std::invalid_argument("lattice: onsite hop with distinct domains");
            if (o1 == o2) {
                if (std::abs(amp.imag()) > 1e-12)
                    throw std::invalid_argument("lattice: onsite diagonal amplitude must be real");
                amp = amp.real();
            } else if (o1 > o2) {
                std::swap(o1, o2);
                amp = std::conj(amp);
            }
        } else if (!lex_positive(t)) {
            std::swap(o1, o2);
            std::swap(d1, d2);
            t = negate(t);
            amp = std::conj(amp);
        }
        Key key{o1, o2, d1, d2, t};
        auto it = table.find(key);
        if (it != table.end()) {
            if (std::abs(it->second - amp) > 1e-12)
                throw std::invalid_argument("lattice: conflicting duplicate hop entries");
            continue;
        }
        table.emplace(std::move(key), amp);
    }
    std::vector<CanonicalHop> out;
    out.reserve(table.size());
    for (auto& [k, v] : table)
        out.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k),
                       std::get<4>(k), v});
    return out;
}

}  // namespace

OracleTuple build_tight_binding(const LatticeSpec& spec) {
    auto model = std::make_shared<LatticeModel>();
    model->domains = spec.domains;
    if (model->domains.empty()) {
        // no declared domains: the whole lattice is one region
        Domain bulk;
        bulk.label = "bulk";
        bulk.lo.assign(spec.dims.size(), 0);
        for (auto d : spec.dims) bulk.hi.push_back(d - 1);
        model->domains.push_back(std::move(bulk));
    }
    validate_spec(spec, model->domains);
    model->geom = LatticeGeometry(spec.dims, spec.orbitals, spec.boundary);
    model->hops = canonicalize_hops(spec);
    model->disorder = spec.disorder;
    if (spec.disorder) {
        for (size_t d = 0; d < model->domains.size(); ++d)
            if (model->domains[d].label == spec.disorder->domain)
                model->disorder_domain = static_cast<int>(d);
    }

    OracleTuple o;
    o.n = qubits_for(static_cast<Index>(spec.n_modes()));
    o.label = "tight-binding(" + std::to_string(spec.dims.size()) + "d)";
    o.row = [model](Index i) { return model->row(i); };
    o.entry = [model](Index i, Index j) { return model->entry(i, j); };

    // tight sparsity from a full scan at desk scale, else the candidate count
    const Index n_modes = static_cast<Index>(spec.n_modes());
    if (o.n <= 14) {
        size_t s = 0;
        for (Index i = 0; i < n_modes; ++i) s = std::max(s, model->row(i).size());
        o.sparsity = static_cast<int>(std::max<size_t>(s, 1));
    } else {
        o.sparsity = static_cast<int>(2 * model->hops.size() + 1);
    }
    return o;
}

double disorder_value(std::uint64_t key, std::span<const std::int64_t> coords,
                      double amplitude) {
    return amplitude * prf_uniform(key, coords);
}

LatticeSpec parse_lattice_spec(const std::string& text) {
    LatticeSpec spec;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::invalid_argument("lattice spec line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos) fail("expected key = value");
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
        };
        trim(key);
        trim(value);

        auto split_groups = [&](const std::string& s) {
            std::vector<std::vector<std::string>> groups(1);
            std::istringstream vs(s);
            std::string tok;
            while (vs >> tok) {
                if (tok == ":")
                    groups.emplace_back();
                else
                    groups.back().push_back(tok);
            }
            return groups;
        };
        auto to_i64 = [&](const std::string& s) -> std::int64_t {
            try {
                size_t used = 0;
                auto v = std::stoll(s, &used);
                if (used != s.size()) fail("malformed integer '" + s + "'");
                return v;
            } catch (const std::invalid_argument&) {
                fail("malformed integer '" + s + "'");
            } catch (const std::out_of_range&) {
                fail("integer out of range '" + s + "'");
            }
            return 0;
        };
        auto to_f64 = [&](const std::string& s) -> double {
            try {
                size_t used = 0;
                auto v = std::stod(s, &used);
                if (used != s.size()) fail("malformed number '" + s + "'");
                return v;
            } catch (const std::invalid_argument&) {
                fail("malformed number '" + s + "'");
            } catch (const std::out_of_range&) {
                fail("number out of range '" + s + "'");
            }
            return 0;
        };

        if (key == "dims") {
            std::istringstream vs(value);
            std::string tok;
            spec.dims.clear();
            while (vs >> tok) spec.dims.push_back(to_i64(tok));
        } else if (key == "boundary") {
            if (value == "open")
                spec.boundary = Boundary::open;
            else if (value == "periodic")
                spec.boundary = Boundary::periodic;
            else
                fail("boundary must be open or periodic");
        } else if (key == "orbitals") {
            spec.orbitals = static_cast<int>(to_i64(value));
        } else if (key == "domain") {
            auto groups = split_groups(value);
            if (groups.size() != 2 || groups[0].size() != 1 || groups[1].size() % 2 != 0)
                fail("domain = label : lo1 hi1 [lo2 hi2 ...]");
            Domain dom;
            dom.label = groups[0][0];
            for (size_t k = 0; k < groups[1].size(); k += 2) {
                dom.lo.push_back(to_i64(groups[1][k]));
                dom.hi.push_back(to_i64(groups[1][k + 1]));
            }
            spec.domains.push_back(std::move(dom));
        } else if (key == "hop") {
            auto groups = split_groups(value);
            if (groups.size() != 3 || groups[0].size() != 4 || groups[2].size() != 2)
                fail("hop = o1 o2 dom_from dom_to : t... : re im");
            HopEntry h;
            h.o1 = static_cast<int>(to_i64(groups[0][0]));
            h.o2 = static_cast<int>(to_i64(groups[0][1]));
            h.dom_from = groups[0][2];
            h.dom_to = groups[0][3];
            for (const auto& s : groups[1]) h.displacement.push_back(to_i64(s));
            h.amplitude = {to_f64(groups[2][0]), to_f64(groups[2][1])};
            spec.hops.push_back(std::move(h));
        } else if (key == "disorder") {
            std::istringstream vs(value);
            std::string k, dom, w;
            if (!(vs >> k >> dom >> w)) fail("disorder = key domain W");
            DisorderSpec d;
            d.key = static_cast<std::uint64_t>(to_i64(k));
            d.domain = dom;
            d.amplitude = to_f64(w);
            spec.disorder = d;
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    return spec;
}

}  // namespace fermiblock
