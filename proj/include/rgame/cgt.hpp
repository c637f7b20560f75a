// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rgame/common.hpp"

namespace rgame::cgt {

class Game;

namespace detail {

struct Node {
    std::vector<std::uint32_t> left;   // sorted, unique node ids
    std::vector<std::uint32_t> right;
};

struct KeyHash {
    std::size_t operator()(const std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>& k) const {
        std::size_t h = 1469598103934665603ULL;
        auto mix = [&](std::uint32_t v) { h = (h ^ v) * 1099511628211ULL; };
        for (auto v : k.first) mix(v);
        mix(0xFFFFFFFFu);
        for (auto v : k.second) mix(v);
        return h;
    }
};

struct PairHash {
    std::size_t operator()(const std::pair<std::uint32_t, std::uint32_t>& p) const {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(p.first) << 32) | p.second);
    }
};

// Hash-consed store of game forms plus memo tables. Node addresses are stable
// (deque), so readers never see a moved node; all access goes through `mutex`.
struct Table {
    std::recursive_mutex mutex;
    std::deque<Node> nodes;
    std::unordered_map<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>, std::uint32_t, KeyHash> index;
    std::unordered_map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t, PairHash> add_memo;
    std::unordered_map<std::pair<std::uint32_t, std::uint32_t>, bool, PairHash> geq_memo;
    std::unordered_map<std::uint32_t, std::uint32_t> neg_memo;
    std::unordered_map<std::uint32_t, std::uint32_t> canonical_memo;

    std::uint32_t intern(std::vector<std::uint32_t> l, std::vector<std::uint32_t> r) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        std::lock_guard lock(mutex);
        auto key = std::make_pair(l, r);
        if (auto it = index.find(key); it != index.end()) return it->second;
        const auto id = static_cast<std::uint32_t>(nodes.size());
        nodes.push_back({std::move(l), std::move(r)});
        index.emplace(std::move(key), id);
        return id;
    }
};

inline Table& table() {
    static Table t;
    return t;
}

}  // namespace detail

// A short game form {L | R}. Forms are hash-consed, so == is structural equality.
class Game {
public:
    Game() : id_(detail::table().intern({}, {})) {}

    static Game make(const std::vector<Game>& left, const std::vector<Game>& right) {
        return Game(detail::table().intern(ids(left), ids(right)));
    }

    std::vector<Game> left() const { return wrap(node().left); }
    std::vector<Game> right() const { return wrap(node().right); }
    std::uint32_t id() const { return id_; }

    friend bool operator==(const Game& a, const Game& b) { return a.id_ == b.id_; }
    friend bool operator!=(const Game& a, const Game& b) { return a.id_ != b.id_; }
    friend bool operator<(const Game& a, const Game& b) { return a.id_ < b.id_; }

    static Game from_id(std::uint32_t id) { return Game(id); }

private:
    explicit Game(std::uint32_t id) : id_(id) {}

    const detail::Node& node() const {
        auto& t = detail::table();
        std::lock_guard lock(t.mutex);
        return t.nodes[id_];
    }
    static std::vector<std::uint32_t> ids(const std::vector<Game>& gs) {
        std::vector<std::uint32_t> out;
        for (const auto& g : gs) out.push_back(g.id_);
        return out;
    }
    static std::vector<Game> wrap(const std::vector<std::uint32_t>& ids) {
        std::vector<Game> out;
        for (auto i : ids) out.push_back(Game(i));
        return out;
    }

    std::uint32_t id_;
};

inline Game zero() { return Game(); }
inline Game star() { return Game::make({zero()}, {zero()}); }

// Canonical integer n: {n-1 |} for n > 0, {| n+1} for n < 0.
inline Game integer(int n) {
    Game g = zero();
    for (int k = 0; k < std::abs(n); ++k) g = n > 0 ? Game::make({g}, {}) : Game::make({}, {g});
    return g;
}

// {G^L + H, G + H^L | G^R + H, G + H^R}.
inline Game add(const Game& g, const Game& h) {
    auto& t = detail::table();
    const auto key = std::make_pair(std::min(g.id(), h.id()), std::max(g.id(), h.id()));
    {
        std::lock_guard lock(t.mutex);
        if (auto it = t.add_memo.find(key); it != t.add_memo.end()) return Game::from_id(it->second);
    }
    std::vector<Game> l, r;
    for (const auto& x : g.left()) l.push_back(add(x, h));
    for (const auto& x : h.left()) l.push_back(add(g, x));
    for (const auto& x : g.right()) r.push_back(add(x, h));
    for (const auto& x : h.right()) r.push_back(add(g, x));
    const Game s = Game::make(l, r);
    std::lock_guard lock(t.mutex);
    t.add_memo.emplace(key, s.id());
    return s;
}

// {-G^R | -G^L}.
inline Game neg(const Game& g) {
    auto& t = detail::table();
    {
        std::lock_guard lock(t.mutex);
        if (auto it = t.neg_memo.find(g.id()); it != t.neg_memo.end()) return Game::from_id(it->second);
    }
    std::vector<Game> l, r;
    for (const auto& x : g.right()) l.push_back(neg(x));
    for (const auto& x : g.left()) r.push_back(neg(x));
    const Game n = Game::make(l, r);
    std::lock_guard lock(t.mutex);
    t.neg_memo.emplace(g.id(), n.id());
    return n;
}

// G >= H iff no G^R <= H and no H^L >= G.
inline bool geq(const Game& g, const Game& h) {
    auto& t = detail::table();
    const auto key = std::make_pair(g.id(), h.id());
    {
        std::lock_guard lock(t.mutex);
        if (auto it = t.geq_memo.find(key); it != t.geq_memo.end()) return it->second;
    }
    bool result = true;
    for (const auto& gr : g.right()) {
        if (geq(h, gr)) {
            result = false;
            break;
        }
    }
    if (result) {
        for (const auto& hl : h.left()) {
            if (geq(hl, g)) {
                result = false;
                break;
            }
        }
    }
    std::lock_guard lock(t.mutex);
    t.geq_memo.emplace(key, result);
    return result;
}

inline bool equal(const Game& g, const Game& h) { return geq(g, h) && geq(h, g); }
inline bool less(const Game& g, const Game& h) { return geq(h, g) && !geq(g, h); }
inline bool fuzzy(const Game& g, const Game& h) { return !geq(g, h) && !geq(h, g); }

enum class Outcome { Positive, Negative, Zero, Fuzzy };

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Positive: return "Positive";
        case Outcome::Negative: return "Negative";
        case Outcome::Zero: return "Zero";
        case Outcome::Fuzzy: return "Fuzzy";
    }
    return "?";
}

namespace detail {

// Perfect play by search, last player to move wins.
inline bool left_wins_first(const Game& g, std::map<std::pair<std::uint32_t, bool>, bool>& memo);

inline bool right_wins_first(const Game& g, std::map<std::pair<std::uint32_t, bool>, bool>& memo) {
    const auto key = std::make_pair(g.id(), false);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool win = false;
    for (const auto& x : g.right()) {
        if (!left_wins_first(x, memo)) {
            win = true;
            break;
        }
    }
    memo[key] = win;
    return win;
}

inline bool left_wins_first(const Game& g, std::map<std::pair<std::uint32_t, bool>, bool>& memo) {
    const auto key = std::make_pair(g.id(), true);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool win = false;
    for (const auto& x : g.left()) {
        if (!right_wins_first(x, memo)) {
            win = true;
            break;
        }
    }
    memo[key] = win;
    return win;
}

}  // namespace detail

inline Outcome outcome(const Game& g) {
    std::map<std::pair<std::uint32_t, bool>, bool> memo;
    const bool l = detail::left_wins_first(g, memo);
    const bool r = detail::right_wins_first(g, memo);
    if (l && !r) return Outcome::Positive;
    if (r && !l) return Outcome::Negative;
    if (!l && !r) return Outcome::Zero;
    return Outcome::Fuzzy;
}

// Every option a number and no left option >= any right option.
inline bool is_number(const Game& g) {
    const auto l = g.left();
    const auto r = g.right();
    for (const auto& x : l) {
        if (!is_number(x)) return false;
    }
    for (const auto& x : r) {
        if (!is_number(x)) return false;
    }
    for (const auto& a : l) {
        for (const auto& b : r) {
            if (geq(a, b)) return false;
        }
    }
    return true;
}

namespace detail {

// Keeps the undominated options: maximal for Left (`keep_greater`), minimal for Right.
inline std::vector<Game> undominated(const std::vector<Game>& opts, bool keep_greater) {
    std::vector<Game> out;
    for (std::size_t i = 0; i < opts.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < opts.size() && !dominated; ++j) {
            if (i == j) continue;
            const bool beats = keep_greater ? geq(opts[j], opts[i]) : geq(opts[i], opts[j]);
            if (!beats) continue;
            // Equal options: keep the first.
            const bool tie = equal(opts[i], opts[j]);
            dominated = !tie || j < i;
        }
        if (!dominated) out.push_back(opts[i]);
    }
    return out;
}

}  // namespace detail

// Removes dominated options and bypasses reversible ones until nothing changes.
inline Game canonical_form(const Game& g) {
    auto& t = detail::table();
    {
        std::lock_guard lock(t.mutex);
        if (auto it = t.canonical_memo.find(g.id()); it != t.canonical_memo.end()) return Game::from_id(it->second);
    }
    std::vector<Game> l, r;
    for (const auto& x : g.left()) l.push_back(canonical_form(x));
    for (const auto& x : g.right()) r.push_back(canonical_form(x));
    Game cur = Game::make(l, r);
    for (;;) {
        l = detail::undominated(cur.left(), true);
        r = detail::undominated(cur.right(), false);
        const Game pruned = Game::make(l, r);
        // Left option gl is reversible through gl^R <= G: replace it by gl^RL.
        std::vector<Game> nl, nr;
        bool changed = false;
        for (const auto& gl : l) {
            bool bypassed = false;
            for (const auto& glr : gl.right()) {
                if (geq(pruned, glr)) {
                    for (const auto& x : glr.left()) nl.push_back(x);
                    bypassed = changed = true;
                    break;
                }
            }
            if (!bypassed) nl.push_back(gl);
        }
        for (const auto& gr : r) {
            bool bypassed = false;
            for (const auto& grl : gr.left()) {
                if (geq(grl, pruned)) {
                    for (const auto& x : grl.right()) nr.push_back(x);
                    bypassed = changed = true;
                    break;
                }
            }
            if (!bypassed) nr.push_back(gr);
        }
        const Game next = Game::make(nl, nr);
        if (!changed && next == cur) break;
        cur = next;
    }
    std::lock_guard lock(t.mutex);
    t.canonical_memo.emplace(g.id(), cur.id());
    return cur;
}

namespace detail {

inline std::vector<std::vector<Game>> subsets(const std::vector<Game>& items) {
    std::vector<std::vector<Game>> out;
    for (std::uint32_t mask = 0; mask < (1u << items.size()); ++mask) {
        std::vector<Game> s;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (mask & (1u << i)) s.push_back(items[i]);
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<Game> sorted_unique(std::set<Game> s) { return {s.begin(), s.end()}; }

}  // namespace detail

// Distinct canonical values whose options come from born_by(day - 1).
inline std::vector<Game> born_by(int day) {
    if (day < 0) throw domain_error("born_by: day must be non-negative");
    if (day > 2) throw domain_error("born_by: days beyond 2 are not supported");
    if (day == 0) return {zero()};
    const auto prev = born_by(day - 1);
    const auto sets = detail::subsets(prev);
    std::set<Game> values;
    for (const auto& l : sets) {
        for (const auto& r : sets) values.insert(canonical_form(Game::make(l, r)));
    }
    return detail::sorted_unique(std::move(values));
}

// Number of forms {L | R} over born_by(day - 1) in which neither side holds
// two comparable options (no option dominates or equals another).
inline std::size_t count_undominated_forms(int day) {
    if (day < 1 || day > 2) throw domain_error("count_undominated_forms: day must be 1 or 2");
    const auto prev = born_by(day - 1);
    std::size_t antichains = 0;
    for (const auto& s : detail::subsets(prev)) {
        bool ok = true;
        for (std::size_t i = 0; i < s.size() && ok; ++i) {
            for (std::size_t j = i + 1; j < s.size() && ok; ++j) ok = fuzzy(s[i], s[j]);
        }
        antichains += ok;
    }
    return antichains * antichains;
}

// ---- notation -------------------------------------------------------------

namespace detail {

inline std::optional<int> as_integer(const Game& g) {
    for (int n = -64; n <= 64; ++n) {
        if (g == integer(n)) return n;
    }
    return std::nullopt;
}

}  // namespace detail

// "{a,b|c}" with the abbreviations 0, n, -n and *; option lists printed in sorted order.
inline std::string to_string(const Game& g) {
    if (auto n = detail::as_integer(g)) return std::to_string(*n);
    if (g == star()) return "*";
    auto side = [](const std::vector<Game>& opts) {
        std::vector<std::string> parts;
        for (const auto& o : opts) parts.push_back(to_string(o));
        std::sort(parts.begin(), parts.end());
        std::string s;
        for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
        return s;
    };
    return "{" + side(g.left()) + "|" + side(g.right()) + "}";
}

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Game parse_all() {
        Game g = parse();
        skip();
        if (pos_ != s_.size()) fail("trailing input");
        return g;
    }

private:
    void skip() {
        while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw domain_error("game notation: " + what + " at offset " + std::to_string(pos_));
    }
    Game parse() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (c == '*') {
            ++pos_;
            return star();
        }
        if (c == '{') {
            ++pos_;
            auto l = list('|');
            ++pos_;
            auto r = list('}');
            ++pos_;
            return Game::make(l, r);
        }
        if (c == '-' || (c >= '0' && c <= '9')) {
            std::size_t end = pos_ + (c == '-');
            while (end < s_.size() && s_[end] >= '0' && s_[end] <= '9') ++end;
            if (end == pos_ + (c == '-')) fail("expected digits");
            const int n = std::stoi(std::string(s_.substr(pos_, end - pos_)));
            if (std::abs(n) > 64) fail("integer out of range");
            pos_ = end;
            return integer(n);
        }
        fail(std::string("unexpected '") + c + "'");
    }
    std::vector<Game> list(char close) {
        std::vector<Game> out;
        skip();
        if (pos_ < s_.size() && s_[pos_] == close) return out;
        for (;;) {
            out.push_back(parse());
            skip();
            if (pos_ >= s_.size()) fail("unterminated option list");
            if (s_[pos_] == close) return out;
            if (s_[pos_] != ',') fail("expected ',' or closing delimiter");
            ++pos_;
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Game parse_game(std::string_view s) { return detail::Parser(s).parse_all(); }

// ---- board games ----------------------------------------------------------

// A game played by placing pieces on a finite board. Each position records the
// sites holding this game's pieces.
struct BoardGame {
    int board_size = 0;
    std::set<int> occupied;
    std::vector<std::shared_ptr<const BoardGame>> left, right;

    // One move for each listed player, placing a piece on `site`.
    static BoardGame single_move(int board_size, int site, bool left_may, bool right_may) {
        if (site < 0 || site >= board_size) throw domain_error("single_move: site off the board");
        BoardGame g;
        g.board_size = board_size;
        auto after = std::make_shared<BoardGame>();
        after->board_size = board_size;
        after->occupied = {site};
        if (left_may) g.left.push_back(after);
        if (right_may) g.right.push_back(after);
        return g;
    }
};

enum class SumMode { disjoint, exclusive };

namespace detail {

inline std::shared_ptr<const BoardGame> shifted(const BoardGame& g, int by, int board_size) {
    auto out = std::make_shared<BoardGame>();
    out->board_size = board_size;
    for (int s : g.occupied) out->occupied.insert(s + by);
    for (const auto& x : g.left) out->left.push_back(shifted(*x, by, board_size));
    for (const auto& x : g.right) out->right.push_back(shifted(*x, by, board_size));
    return out;
}

inline bool disjoint_sites(const BoardGame& a, const BoardGame& b) {
    for (int s : a.occupied) {
        if (b.occupied.count(s)) return false;
    }
    return true;
}

inline std::shared_ptr<const BoardGame> sum_positions(const BoardGame& g, const BoardGame& h, bool exclusive) {
    auto out = std::make_shared<BoardGame>();
    out->board_size = g.board_size;
    out->occupied = g.occupied;
    out->occupied.insert(h.occupied.begin(), h.occupied.end());
    auto moves = [&](const auto& gs, const auto& hs, auto& dest) {
        for (const auto& x : gs) {
            if (!exclusive || disjoint_sites(*x, h)) dest.push_back(sum_positions(*x, h, exclusive));
        }
        for (const auto& y : hs) {
            if (!exclusive || disjoint_sites(g, *y)) dest.push_back(sum_positions(g, *y, exclusive));
        }
    };
    moves(g.left, h.left, out->left);
    moves(g.right, h.right, out->right);
    return out;
}

}  // namespace detail

// Combined play of g and h. Disjoint: h's board is appended after g's. Exclusive:
// same board, and no move may land a piece on a site the other game occupies.
inline BoardGame board_sum(const BoardGame& g, const BoardGame& h, SumMode mode) {
    if (mode == SumMode::exclusive) {
        if (g.board_size != h.board_size) throw domain_error("board_sum: exclusive sum needs one shared board");
        return *detail::sum_positions(g, h, true);
    }
    const int size = g.board_size + h.board_size;
    const auto gs = detail::shifted(g, 0, size);
    const auto hs = detail::shifted(h, g.board_size, size);
    return *detail::sum_positions(*gs, *hs, false);
}

// Game form of the move tree.
inline Game to_game(const BoardGame& b) {
    std::vector<Game> l, r;
    for (const auto& x : b.left) l.push_back(to_game(*x));
    for (const auto& x : b.right) r.push_back(to_game(*x));
    return Game::make(l, r);
}

// Terminal positions of the move tree, counted per path.
inline std::size_t leaf_count(const BoardGame& b) {
    if (b.left.empty() && b.right.empty()) return 1;
    std::size_t n = 0;
    for (const auto& x : b.left) n += leaf_count(*x);
    for (const auto& x : b.right) n += leaf_count(*x);
    return n;
}

}  // namespace rgame::cgt
