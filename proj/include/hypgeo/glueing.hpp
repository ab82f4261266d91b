#pragma once

/**
 * @file glueing.hpp
 * @brief Graph-driven assembly of hyperbolic pieces and the counting pipeline.
 *
 * Rooted 4-regular simple graphs with edges labelled a+, a-, b+, b- are
 * enumerated exhaustively (labelled vertices, canonical bitmask order). Each
 * graph prescribes a closed complex: P_v at the root, P_u at the other
 * vertices, P_x on every x-labelled edge. Pairing isometries are modelled by
 * an orientation flag only.
 */

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hypgeo {

enum class PieceLabel { APlus, AMinus, BPlus, BMinus, U, V };

inline constexpr std::array<PieceLabel, 4> kEdgeLabels = {PieceLabel::APlus, PieceLabel::AMinus, PieceLabel::BPlus,
                                                          PieceLabel::BMinus};

inline const char* to_string(PieceLabel l) {
    switch (l) {
        case PieceLabel::APlus: return "a+";
        case PieceLabel::AMinus: return "a-";
        case PieceLabel::BPlus: return "b+";
        case PieceLabel::BMinus: return "b-";
        case PieceLabel::U: return "u";
        case PieceLabel::V: return "v";
    }
    return "?";
}

inline PieceLabel parse_piece_label(std::string_view s) {
    for (PieceLabel l : {PieceLabel::APlus, PieceLabel::AMinus, PieceLabel::BPlus, PieceLabel::BMinus, PieceLabel::U, PieceLabel::V})
        if (s == to_string(l)) return l;
    throw std::invalid_argument("unknown piece label '" + std::string(s) + "'");
}

inline bool is_edge_label(PieceLabel l) { return l != PieceLabel::U && l != PieceLabel::V; }

struct PieceTemplate {
    PieceLabel label = PieceLabel::U;
    int boundary_count = 4;
    bool orientable = true;
    double volume_weight = 1.0;
};

/// The six templates indexed by PieceLabel.
class TemplateSet {
public:
    /// Unit weights unless given; order a+, a-, b+, b-, u, v.
    explicit TemplateSet(std::array<double, 6> weights = {1, 1, 1, 1, 1, 1}) {
        for (std::size_t i = 0; i < 6; ++i) {
            if (!(weights[i] > 0)) throw std::invalid_argument("piece volume weights must be positive");
            const auto l = static_cast<PieceLabel>(i);
            templates_[i] = {l, is_edge_label(l) ? 2 : 4, l != PieceLabel::V, weights[i]};
        }
    }

    const PieceTemplate& operator[](PieceLabel l) const { return templates_[static_cast<std::size_t>(l)]; }

    double max_weight() const {
        double m = 0;
        for (const auto& t : templates_) m = std::max(m, t.volume_weight);
        return m;
    }

    TemplateSet scaled(double factor) const {
        std::array<double, 6> w{};
        for (std::size_t i = 0; i < 6; ++i) w[i] = templates_[i].volume_weight * factor;
        return TemplateSet(w);
    }

private:
    std::array<PieceTemplate, 6> templates_;
};

enum class LabelMode { Proper, Free };

inline const char* to_string(LabelMode m) { return m == LabelMode::Proper ? "proper" : "free"; }

inline LabelMode parse_label_mode(std::string_view s) {
    if (s == "proper") return LabelMode::Proper;
    if (s == "free") return LabelMode::Free;
    throw std::invalid_argument("unknown labelling mode '" + std::string(s) + "' (expected proper or free)");
}

/// No simple 4-regular graph has fewer than 5 vertices.
inline constexpr int kMinVertices = 5;
/// Largest m for which exhaustive base-graph enumeration is attempted.
inline constexpr int kMaxExhaustiveVertices = 9;

struct GlueingGraph {
    int m = 0;
    std::vector<std::pair<int, int>> edges;  ///< i < j, lexicographic
    std::vector<PieceLabel> labels;          ///< one per edge
    int root = 0;
    LabelMode mode = LabelMode::Free;

    /// Throws std::invalid_argument describing the first violated invariant.
    void validate() const {
        if (m < 1) throw std::invalid_argument("glueing graph: no vertices");
        if (root < 0 || root >= m) throw std::invalid_argument("glueing graph: root is not a vertex");
        if (labels.size() != edges.size()) throw std::invalid_argument("glueing graph: one label per edge required");
        std::vector<int> degree(static_cast<std::size_t>(m), 0);
        std::vector<std::pair<int, int>> seen;
        for (auto [i, j] : edges) {
            if (i < 0 || j < 0 || i >= m || j >= m) throw std::invalid_argument("glueing graph: edge endpoint out of range");
            if (i == j) throw std::invalid_argument("glueing graph: loop at vertex " + std::to_string(i));
            seen.emplace_back(std::min(i, j), std::max(i, j));
            ++degree[static_cast<std::size_t>(i)];
            ++degree[static_cast<std::size_t>(j)];
        }
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) throw std::invalid_argument("glueing graph: multi-edge");
        for (int v = 0; v < m; ++v)
            if (degree[static_cast<std::size_t>(v)] != 4)
                throw std::invalid_argument("glueing graph: vertex " + std::to_string(v) + " has degree " +
                                            std::to_string(degree[static_cast<std::size_t>(v)]));
        for (PieceLabel l : labels)
            if (!is_edge_label(l)) throw std::invalid_argument("glueing graph: edge labels must be a+, a-, b+ or b-");
        if (mode == LabelMode::Proper) {
            std::vector<unsigned> used(static_cast<std::size_t>(m), 0);
            for (std::size_t e = 0; e < edges.size(); ++e) {
                const unsigned bit = 1u << static_cast<unsigned>(labels[e]);
                for (int v : {edges[e].first, edges[e].second}) {
                    if (used[static_cast<std::size_t>(v)] & bit)
                        throw std::invalid_argument("glueing graph: label repeated at vertex " + std::to_string(v));
                    used[static_cast<std::size_t>(v)] |= bit;
                }
            }
        }
    }

    friend bool operator==(const GlueingGraph&, const GlueingGraph&) = default;
};

// ---------------------------------------------------------------------------
// Base graphs.

/// Adjacency bitmask rows; row[i] bit j set iff {i, j} is an edge.
using BaseGraph = std::vector<std::uint16_t>;

inline std::vector<std::pair<int, int>> base_edges(const BaseGraph& g) {
    std::vector<std::pair<int, int>> out;
    const int m = static_cast<int>(g.size());
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (g[static_cast<std::size_t>(i)] >> j & 1u) out.emplace_back(i, j);
    return out;
}

inline std::optional<std::string> enumeration_warning(int m) {
    if (m < kMinVertices)
        return "no simple 4-regular graph has " + std::to_string(m) + " vertices (at least " + std::to_string(kMinVertices) +
               " are needed)";
    return std::nullopt;
}

namespace detail {

/// Vertex-by-vertex completion: vertex i picks its remaining neighbours among j > i.
inline void extend_base(BaseGraph& g, int i, std::vector<BaseGraph>& out) {
    const int m = static_cast<int>(g.size());
    if (i == m) {
        out.push_back(g);
        return;
    }
    const int need = 4 - std::popcount(g[static_cast<std::size_t>(i)]);
    if (need < 0) return;
    std::vector<int> cand;
    for (int j = i + 1; j < m; ++j)
        if (std::popcount(g[static_cast<std::size_t>(j)]) < 4) cand.push_back(j);
    if (static_cast<int>(cand.size()) < need) return;
    // subsets of cand of size `need` in lexicographic order of their bitmask
    std::vector<int> pick(static_cast<std::size_t>(need));
    std::function<void(int, int)> choose = [&](int start, int k) {
        if (k == need) {
            for (int j : pick) {
                g[static_cast<std::size_t>(i)] |= static_cast<std::uint16_t>(1u << j);
                g[static_cast<std::size_t>(j)] |= static_cast<std::uint16_t>(1u << i);
            }
            // every vertex below i+1 is complete; a vertex that cannot reach degree 4 any more prunes the branch
            bool ok = true;
            for (int v = i + 1; v < m && ok; ++v) {
                const int deg = std::popcount(g[static_cast<std::size_t>(v)]);
                ok = deg + (m - 1 - i - 1) >= 4 || deg == 4;
            }
            if (ok) extend_base(g, i + 1, out);
            for (int j : pick) {
                g[static_cast<std::size_t>(i)] &= static_cast<std::uint16_t>(~(1u << j));
                g[static_cast<std::size_t>(j)] &= static_cast<std::uint16_t>(~(1u << i));
            }
            return;
        }
        for (int c = start; c < static_cast<int>(cand.size()); ++c) {
            pick[static_cast<std::size_t>(k)] = cand[static_cast<std::size_t>(c)];
            choose(c + 1, k + 1);
        }
    };
    choose(0, 0);
}

}  // namespace detail

/**
 * All labelled simple 4-regular graphs on m vertices, each exactly once.
 * The search is split by the neighbourhood of vertex 0 and the parts run
 * concurrently; results are concatenated in partition order, so the output
 * does not depend on scheduling.
 */
inline std::vector<BaseGraph> enumerate_base_graphs(int m) {
    if (m < kMinVertices) return {};
    if (m > 16) throw std::invalid_argument("enumerate_base_graphs: at most 16 vertices fit the bitmask");
    std::vector<std::uint16_t> firsts;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask)
        if (!(mask & 1u) && std::popcount(mask) == 4) firsts.push_back(static_cast<std::uint16_t>(mask));
    // lexicographic order of the chosen neighbour lists
    std::sort(firsts.begin(), firsts.end(), [](std::uint16_t a, std::uint16_t b) {
        for (int j = 1; j < 16; ++j) {
            const bool x = a >> j & 1u, y = b >> j & 1u;
            if (x != y) return x;
        }
        return false;
    });
    std::vector<std::future<std::vector<BaseGraph>>> parts;
    for (std::uint16_t first : firsts)
        parts.push_back(std::async(std::launch::async, [m, first] {
            BaseGraph g(static_cast<std::size_t>(m), 0);
            g[0] = first;
            for (int j = 1; j < m; ++j)
                if (first >> j & 1u) g[static_cast<std::size_t>(j)] |= 1u;
            std::vector<BaseGraph> out;
            detail::extend_base(g, 1, out);
            return out;
        }));
    std::vector<BaseGraph> all;
    for (auto& p : parts) {
        auto part = p.get();
        all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return all;
}

/// Proper 4-edge-colourings (each colour a perfect matching), labels in edge order.
inline std::vector<std::vector<PieceLabel>> proper_labelings(const BaseGraph& g) {
    const auto edges = base_edges(g);
    std::vector<std::vector<PieceLabel>> out;
    if (g.size() % 2) return out;  // no perfect matching on an odd vertex set
    std::vector<unsigned> used(g.size(), 0);
    std::vector<PieceLabel> cur(edges.size());
    std::function<void(std::size_t)> go = [&](std::size_t e) {
        if (e == edges.size()) {
            out.push_back(cur);
            return;
        }
        const auto [i, j] = edges[e];
        for (PieceLabel l : kEdgeLabels) {
            const unsigned bit = 1u << static_cast<unsigned>(l);
            if ((used[static_cast<std::size_t>(i)] | used[static_cast<std::size_t>(j)]) & bit) continue;
            used[static_cast<std::size_t>(i)] |= bit;
            used[static_cast<std::size_t>(j)] |= bit;
            cur[e] = l;
            go(e + 1);
            used[static_cast<std::size_t>(i)] &= ~bit;
            used[static_cast<std::size_t>(j)] &= ~bit;
        }
    };
    go(0);
    return out;
}

/**
 * Streams every rooted labelled graph on m vertices to `visit` in canonical
 * order (base graph, then root, then labelling with the first edge varying
 * slowest). Stops early when `visit` returns false. Returns the number of
 * graphs visited.
 */
inline std::uint64_t for_each_graph(int m, LabelMode mode, const std::function<bool(const GlueingGraph&)>& visit) {
    std::uint64_t n = 0;
    for (const BaseGraph& base : enumerate_base_graphs(m)) {
        GlueingGraph g{m, base_edges(base), {}, 0, mode};
        std::vector<std::vector<PieceLabel>> proper;
        if (mode == LabelMode::Proper) proper = proper_labelings(base);
        for (int root = 0; root < m; ++root) {
            g.root = root;
            if (mode == LabelMode::Proper) {
                for (const auto& labels : proper) {
                    g.labels = labels;
                    ++n;
                    if (!visit(g)) return n;
                }
                continue;
            }
            std::vector<int> digit(g.edges.size(), 0);
            g.labels.assign(g.edges.size(), PieceLabel::APlus);
            while (true) {
                ++n;
                if (!visit(g)) return n;
                std::size_t k = digit.size();
                while (k > 0 && digit[k - 1] == 3) {
                    digit[k - 1] = 0;
                    g.labels[k - 1] = kEdgeLabels[0];
                    --k;
                }
                if (k == 0) break;
                ++digit[k - 1];
                g.labels[k - 1] = kEdgeLabels[static_cast<std::size_t>(digit[k - 1])];
            }
        }
    }
    return n;
}

/// The first `limit` graphs of the stream.
inline std::vector<GlueingGraph> enumerate_graphs(int m, LabelMode mode, std::size_t limit = SIZE_MAX) {
    std::vector<GlueingGraph> out;
    if (limit == 0) return out;
    for_each_graph(m, mode, [&](const GlueingGraph& g) {
        out.push_back(g);
        return out.size() < limit;
    });
    return out;
}

struct CountRow {
    int m = 0;
    std::uint64_t base_count = 0;
    mpz_class rooted_labelled_count;
};

struct CountTable {
    LabelMode mode = LabelMode::Free;
    std::vector<CountRow> rows;
    std::optional<std::string> warning;
};

/// m * 4^(2m) labelled rootings per base graph in free mode (2m edges).
inline mpz_class free_multiplier(int m) {
    mpz_class four_pow;
    mpz_ui_pow_ui(four_pow.get_mpz_t(), 4, static_cast<unsigned long>(2 * m));
    return four_pow * m;
}

/// Exact counts for m = 5..m_max. Refuses m_max above the exhaustive bound.
inline CountTable count_graphs(int m_max, LabelMode mode) {
    if (m_max > kMaxExhaustiveVertices)
        throw std::invalid_argument("count_graphs: m-max " + std::to_string(m_max) + " exceeds the exhaustive bound " +
                                    std::to_string(kMaxExhaustiveVertices));
    CountTable t{mode, {}, enumeration_warning(m_max)};
    for (int m = kMinVertices; m <= m_max; ++m) {
        const auto bases = enumerate_base_graphs(m);
        CountRow row{m, bases.size(), 0};
        if (mode == LabelMode::Free) {
            row.rooted_labelled_count = free_multiplier(m) * static_cast<unsigned long>(bases.size());
        } else {
            for (const auto& b : bases) row.rooted_labelled_count += static_cast<unsigned long>(proper_labelings(b).size());
            row.rooted_labelled_count *= m;
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Assembly.

struct PieceInstance {
    PieceLabel label = PieceLabel::U;
    enum class Source { Vertex, Edge } source = Source::Vertex;
    int index = 0;  ///< vertex or edge index in the glueing graph
    int boundary_count = 4;
    bool orientable = true;
    double volume_weight = 1.0;
    int sheet = 0;  ///< 0 or 1 in a double cover
};

struct Slot {
    std::size_t piece = 0;
    int boundary = 0;
    friend auto operator<=>(const Slot&, const Slot&) = default;
};

struct SlotPairing {
    Slot first, second;
    bool reversing = false;  ///< pairing flips the reference orientations
};

/**
 * A complex of pieces glued along boundary slots. `joined` links the two
 * halves of the orientation cover of a non-orientable piece (they form one
 * connected piece); `deck` is the sheet-exchanging involution of a double
 * cover, on pieces and on slots.
 */
struct AssembledManifold {
    std::vector<PieceInstance> pieces;
    std::vector<SlotPairing> pairings;
    std::vector<std::pair<std::size_t, std::size_t>> joined;
    std::optional<std::vector<std::size_t>> deck;
    std::optional<std::map<Slot, Slot>> deck_slots;
};

/// Pairing count per edge is 2, so 4m pairings in total.
inline AssembledManifold assemble(const GlueingGraph& g, const TemplateSet& templates = TemplateSet()) {
    g.validate();
    AssembledManifold M;
    for (int v = 0; v < g.m; ++v) {
        const PieceTemplate& t = templates[v == g.root ? PieceLabel::V : PieceLabel::U];
        M.pieces.push_back({t.label, PieceInstance::Source::Vertex, v, t.boundary_count, t.orientable, t.volume_weight, 0});
    }
    std::vector<int> next_free(static_cast<std::size_t>(g.m), 0);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const PieceTemplate& t = templates[g.labels[e]];
        const std::size_t piece = M.pieces.size();
        M.pieces.push_back({t.label, PieceInstance::Source::Edge, static_cast<int>(e), t.boundary_count, t.orientable, t.volume_weight, 0});
        int slot = 0;
        for (int v : {g.edges[e].first, g.edges[e].second}) {
            int& free_slot = next_free[static_cast<std::size_t>(v)];
            if (free_slot >= M.pieces[static_cast<std::size_t>(v)].boundary_count)
                throw std::logic_error("assemble: vertex piece " + std::to_string(v) + " ran out of boundary slots");
            M.pairings.push_back({{static_cast<std::size_t>(v), free_slot++}, {piece, slot++}, false});
        }
    }
    return M;
}

inline bool is_closed(const AssembledManifold& M) {
    std::map<Slot, int> uses;
    for (const auto& p : M.pairings) {
        for (const Slot& s : {p.first, p.second}) {
            if (s.piece >= M.pieces.size() || s.boundary < 0 || s.boundary >= M.pieces[s.piece].boundary_count) return false;
            ++uses[s];
        }
    }
    std::size_t slots = 0;
    for (const auto& piece : M.pieces) slots += static_cast<std::size_t>(piece.boundary_count);
    if (uses.size() != slots) return false;
    return std::all_of(uses.begin(), uses.end(), [](const auto& kv) { return kv.second == 1; });
}

namespace detail {

struct PieceLink {
    std::size_t to;
    bool reversing;
};

inline std::vector<std::vector<PieceLink>> piece_links(const AssembledManifold& M) {
    std::vector<std::vector<PieceLink>> adj(M.pieces.size());
    for (const auto& p : M.pairings) {
        adj[p.first.piece].push_back({p.second.piece, p.reversing});
        adj[p.second.piece].push_back({p.first.piece, p.reversing});
    }
    for (auto [a, b] : M.joined) {
        adj[a].push_back({b, false});
        adj[b].push_back({a, false});
    }
    return adj;
}

}  // namespace detail

inline std::size_t connected_components(const AssembledManifold& M) {
    const auto adj = detail::piece_links(M);
    std::vector<bool> seen(M.pieces.size(), false);
    std::size_t count = 0;
    for (std::size_t s = 0; s < M.pieces.size(); ++s) {
        if (seen[s]) continue;
        ++count;
        std::queue<std::size_t> q;
        q.push(s);
        seen[s] = true;
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (const auto& l : adj[u])
                if (!seen[l.to]) {
                    seen[l.to] = true;
                    q.push(l.to);
                }
        }
    }
    return count;
}

/**
 * False if some piece is non-orientable. Otherwise tries to pick a sign per
 * piece such that every pairing flag equals the product of its end signs;
 * this exists iff every cycle of the pairing graph preserves orientation.
 */
inline bool is_orientable(const AssembledManifold& M) {
    if (!is_closed(M)) throw std::invalid_argument("is_orientable: complex has unpaired boundary slots");
    for (const auto& p : M.pieces)
        if (!p.orientable) return false;
    const auto adj = detail::piece_links(M);
    std::vector<int> sign(M.pieces.size(), -1);
    for (std::size_t s = 0; s < M.pieces.size(); ++s) {
        if (sign[s] >= 0) continue;
        sign[s] = 0;
        std::queue<std::size_t> q;
        q.push(s);
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (const auto& l : adj[u]) {
                const int want = sign[u] ^ static_cast<int>(l.reversing);
                if (sign[l.to] < 0) {
                    sign[l.to] = want;
                    q.push(l.to);
                } else if (sign[l.to] != want) {
                    return false;
                }
            }
        }
    }
    return true;
}

/**
 * Orientation double cover. Piece p lifts to (p, 0) and (p, 1) carrying
 * opposite orientations; a pairing with flag r joins sheet s to sheet s ^ r
 * and becomes orientation preserving. The two lifts of a non-orientable
 * piece form its (connected, orientable) orientation cover and are recorded
 * in `joined`. Sheet exchange is the deck involution.
 */
inline AssembledManifold orientation_double_cover(const AssembledManifold& M) {
    if (!is_closed(M)) throw std::invalid_argument("orientation_double_cover: complex has unpaired boundary slots");
    const std::size_t n = M.pieces.size();
    AssembledManifold C;
    for (int sheet = 0; sheet < 2; ++sheet)
        for (const auto& p : M.pieces) {
            PieceInstance q = p;
            q.sheet = sheet;
            q.orientable = true;
            C.pieces.push_back(q);
        }
    auto lift = [n](std::size_t piece, int sheet) { return piece + static_cast<std::size_t>(sheet) * n; };
    for (int sheet = 0; sheet < 2; ++sheet)
        for (const auto& p : M.pairings) {
            const int other = sheet ^ static_cast<int>(p.reversing);
            C.pairings.push_back({{lift(p.first.piece, sheet), p.first.boundary}, {lift(p.second.piece, other), p.second.boundary}, false});
        }
    for (std::size_t i = 0; i < n; ++i)
        if (!M.pieces[i].orientable) C.joined.emplace_back(lift(i, 0), lift(i, 1));
    std::vector<std::size_t> deck(2 * n);
    std::map<Slot, Slot> deck_slots;
    for (std::size_t i = 0; i < n; ++i) {
        deck[i] = i + n;
        deck[i + n] = i;
        for (int b = 0; b < M.pieces[i].boundary_count; ++b) {
            deck_slots[{i, b}] = {i + n, b};
            deck_slots[{i + n, b}] = {i, b};
        }
    }
    C.deck = std::move(deck);
    C.deck_slots = std::move(deck_slots);
    return C;
}

inline double volume(const AssembledManifold& M) {
    double v = 0;
    for (const auto& p : M.pieces) v += p.volume_weight;
    return v;
}

// ---------------------------------------------------------------------------
// Growth rate.

struct GrowthFit {
    double c = 0;          ///< slope of log(count) against m log m
    double intercept = 0;
    std::vector<double> residuals;
    bool positive = false;  ///< c clearly above zero
};

/// log of a positive big integer without overflow.
inline double log_mpz(const mpz_class& x) {
    if (x <= 0) throw std::invalid_argument("log_mpz: count must be positive");
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

/// Least squares log(count) = c m log m + b.
inline GrowthFit growth_fit(const std::vector<std::pair<int, mpz_class>>& counts) {
    if (counts.size() < 3) throw std::invalid_argument("growth_fit: need at least 3 rows");
    std::vector<double> xs, ys;
    for (const auto& [m, cnt] : counts) {
        if (m < 2) throw std::invalid_argument("growth_fit: m must be at least 2");
        xs.push_back(m * std::log(static_cast<double>(m)));
        ys.push_back(log_mpz(cnt));
    }
    const double k = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / k, my = sy / k;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("growth_fit: need at least two distinct m");
    GrowthFit fit;
    fit.c = sxy / sxx;
    fit.intercept = my - fit.c * mx;
    for (std::size_t i = 0; i < xs.size(); ++i) fit.residuals.push_back(ys[i] - (fit.c * xs[i] + fit.intercept));
    fit.positive = fit.c > 1e-6;
    return fit;
}

inline std::vector<std::pair<int, mpz_class>> fit_input(const CountTable& t) {
    std::vector<std::pair<int, mpz_class>> out;
    for (const auto& r : t.rows)
        if (r.rooted_labelled_count > 0) out.emplace_back(r.m, r.rooted_labelled_count);
    return out;
}

}  // namespace hypgeo
