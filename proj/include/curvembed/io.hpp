#pragma once
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "formula.hpp"
#include "surface.hpp"

namespace curvembed {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot write file: " + path);
    out << content;
    require(static_cast<bool>(out), "write failed: " + path);
}

namespace detail {

// Line-oriented tokenizer that keeps 1-based line numbers for error messages.
struct LineReader {
    std::vector<std::vector<std::string>> lines;  // tokenized, comment/blank lines dropped
    std::vector<int> numbers;                     // original line number of each kept line
    std::string name;
    std::size_t pos = 0;

    LineReader(const std::string& text, std::string name_, char comment = '#')
        : name(std::move(name_)) {
        std::istringstream in(text);
        std::string line;
        int no = 0;
        while (std::getline(in, line)) {
            ++no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::istringstream ls(line);
            std::vector<std::string> toks;
            std::string t;
            while (ls >> t) {
                // comment lines only: first token starting with the marker
                if (toks.empty() && t[0] == comment) break;
                toks.push_back(t);
            }
            if (toks.empty()) continue;
            lines.push_back(std::move(toks));
            numbers.push_back(no);
        }
    }

    bool done() const { return pos >= lines.size(); }
    [[noreturn]] void err(const std::string& msg, int line_no) const {
        fail(name + ":" + std::to_string(line_no) + ": " + msg);
    }
    const std::vector<std::string>& next(const std::string& what) {
        if (done()) fail(name + ": unexpected end of file, expected " + what);
        return lines[pos++];
    }
    int line_no() const {
        return pos == 0 ? 0 : numbers[pos - 1];
    }
};

inline long to_long(const std::string& s, LineReader& r) {
    try {
        std::size_t used = 0;
        long v = std::stol(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        r.err("bad integer '" + s + "'", r.line_no());
    }
}

inline Rat to_rat(const std::string& s, LineReader& r) {
    auto q = rat_parse(s);
    if (!q) r.err("bad rational '" + s + "'", r.line_no());
    return *q;
}

inline Point read_point(const std::vector<std::string>& toks, std::size_t from, int dim,
                        LineReader& r) {
    if (toks.size() - from != static_cast<std::size_t>(dim))
        r.err("expected " + std::to_string(dim) + " coordinates", r.line_no());
    if (dim == 2) return Point(to_rat(toks[from], r), to_rat(toks[from + 1], r));
    return Point(to_rat(toks[from], r), to_rat(toks[from + 1], r), to_rat(toks[from + 2], r));
}

inline std::string point_str(const Point& p) {
    std::string s = rat_str(p.x) + " " + rat_str(p.y);
    if (p.dim == 3) s += " " + rat_str(p.z);
    return s;
}

}  // namespace detail

// ---- curve files: "CRV <dim> <n>" then n coordinate lines ----

inline PolyCurve parse_curve_text(const std::string& text, const std::string& name = "<curve>") {
    detail::LineReader r(text, name);
    auto head = r.next("CRV header");
    if (head.size() != 3 || head[0] != "CRV") r.err("expected 'CRV <dim> <n>'", r.line_no());
    int dim = static_cast<int>(detail::to_long(head[1], r));
    long n = detail::to_long(head[2], r);
    if (dim != 2 && dim != 3) r.err("dimension must be 2 or 3", r.line_no());
    if (n < 2) r.err("curve needs at least 2 vertices", r.line_no());
    std::vector<Point> pts;
    for (long i = 0; i < n; ++i) {
        auto toks = r.next("coordinate line");
        pts.push_back(detail::read_point(toks, 0, dim, r));
        if (i > 0 && pts[i] == pts[i - 1])
            r.err("repeated consecutive vertex", r.line_no());
    }
    if (!r.done()) r.err("trailing content", r.numbers[r.pos]);
    return make_curve(std::move(pts));
}

inline PolyCurve parse_curve_file(const std::string& path) {
    return parse_curve_text(read_file(path), path);
}

inline std::string serialize_curve(const PolyCurve& c) {
    std::string out = "CRV " + std::to_string(c.dim()) + " " + std::to_string(c.v.size()) + "\n";
    for (const auto& p : c.v) out += detail::point_str(p) + "\n";
    return out;
}

// ---- mesh files: OFF text format ----

inline TriSurface parse_off_text(const std::string& text, const std::string& name = "<mesh>",
                                 std::optional<SurfaceKind> kind = std::nullopt) {
    detail::LineReader r(text, name);
    auto head = r.next("OFF header");
    if (head.size() == 1 && head[0] == "OFF") head = r.next("counts line");
    if (head.size() != 3) r.err("expected '<nv> <nf> <ne>'", r.line_no());
    long nv = detail::to_long(head[0], r), nf = detail::to_long(head[1], r);
    if (nv < 1 || nf < 1) r.err("mesh needs vertices and faces", r.line_no());
    std::vector<Point> verts;
    int dim = 0;
    for (long i = 0; i < nv; ++i) {
        auto toks = r.next("vertex line");
        if (dim == 0) {
            if (toks.size() != 2 && toks.size() != 3)
                r.err("vertex must have 2 or 3 coordinates", r.line_no());
            dim = static_cast<int>(toks.size());
        }
        verts.push_back(detail::read_point(toks, 0, dim, r));
    }
    std::vector<std::array<int, 3>> tris;
    for (long i = 0; i < nf; ++i) {
        auto toks = r.next("face line");
        if (toks.size() != 4 || toks[0] != "3") r.err("expected '3 i j k'", r.line_no());
        std::array<int, 3> t;
        for (int j = 0; j < 3; ++j) {
            long v = detail::to_long(toks[j + 1], r);
            if (v < 0 || v >= nv) r.err("triangle index out of range", r.line_no());
            t[j] = static_cast<int>(v);
        }
        tris.push_back(t);
    }
    if (!r.done()) r.err("trailing content", r.numbers[r.pos]);
    SurfaceKind k = kind.value_or(dim == 3 ? SurfaceKind::terrain : SurfaceKind::plane_with_holes);
    try {
        return make_surface(dim, k, std::move(verts), std::move(tris));
    } catch (const Error& e) {
        fail(name + ": " + e.what());
    }
}

inline TriSurface parse_off_file(const std::string& path,
                                 std::optional<SurfaceKind> kind = std::nullopt) {
    return parse_off_text(read_file(path), path, kind);
}

inline std::string serialize_off(const TriSurface& S) {
    std::string out = "OFF\n";
    out += std::to_string(S.verts.size()) + " " + std::to_string(S.tris.size()) + " " +
           std::to_string(S.edges.size()) + "\n";
    for (const auto& p : S.verts) out += detail::point_str(p) + "\n";
    for (const auto& t : S.tris)
        out += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " +
               std::to_string(t[2]) + "\n";
    return out;
}

// ---- instance metadata ----

struct InstanceMeta {
    Rat eps;
    std::string target;  // holes | plane | terrain
    bool weak = false;   // weak-Frechet mode flag
};

inline InstanceMeta parse_meta_text(const std::string& text, const std::string& name = "<meta>") {
    detail::LineReader r(text, name);
    InstanceMeta m;
    bool saw_eps = false, saw_target = false, saw_mode = false;
    while (!r.done()) {
        auto toks = r.next("meta line");
        if (toks[0] == "eps" && toks.size() == 2) {
            m.eps = detail::to_rat(toks[1], r);
            saw_eps = true;
        } else if (toks[0] == "target" && toks.size() == 2) {
            if (toks[1] != "holes" && toks[1] != "plane" && toks[1] != "terrain")
                r.err("unknown target '" + toks[1] + "'", r.line_no());
            m.target = toks[1];
            saw_target = true;
        } else if (toks[0] == "mode" && toks.size() == 2) {
            if (toks[1] != "frechet" && toks[1] != "weak")
                r.err("unknown mode '" + toks[1] + "'", r.line_no());
            m.weak = (toks[1] == "weak");
            saw_mode = true;
        } else {
            r.err("unknown meta entry '" + toks[0] + "'", r.line_no());
        }
    }
    if (!saw_eps) fail(name + ": missing eps");
    if (!saw_target) fail(name + ": missing target");
    if (!saw_mode) fail(name + ": missing mode");
    return m;
}

inline std::string serialize_meta(const InstanceMeta& m) {
    return "eps " + rat_str(m.eps) + "\ntarget " + m.target + "\nmode " +
           (m.weak ? std::string("weak") : std::string("frechet")) + "\n";
}

// ---- DIMACS CNF ----

inline Formula3CNF parse_dimacs_text(const std::string& text, const std::string& name = "<cnf>") {
    detail::LineReader r(text, name, 'c');
    long nvars = -1, nclauses = -1;
    std::vector<Clause> clauses;
    std::vector<int> cur;
    while (!r.done()) {
        auto toks = r.next("cnf line");
        if (toks[0] == "p") {
            if (nvars >= 0) r.err("duplicate problem line", r.line_no());
            if (toks.size() != 4 || toks[1] != "cnf") r.err("expected 'p cnf n m'", r.line_no());
            nvars = detail::to_long(toks[2], r);
            nclauses = detail::to_long(toks[3], r);
            if (nvars < 0 || nclauses < 0) r.err("negative counts", r.line_no());
            continue;
        }
        if (nvars < 0) r.err("literals before problem line", r.line_no());
        for (const auto& t : toks) {
            long lit = detail::to_long(t, r);
            if (lit == 0) {
                if (cur.size() != 3)
                    r.err("clause must have exactly 3 literals", r.line_no());
                clauses.push_back({cur[0], cur[1], cur[2]});
                cur.clear();
            } else {
                if (std::abs(lit) > nvars) r.err("literal out of range", r.line_no());
                cur.push_back(static_cast<int>(lit));
            }
        }
    }
    if (!cur.empty()) fail(name + ": unterminated clause");
    if (nvars < 0) fail(name + ": missing problem line");
    if (nclauses != static_cast<long>(clauses.size()))
        fail(name + ": clause count mismatch with problem line");
    return make_formula(static_cast<int>(nvars), std::move(clauses));
}

inline Formula3CNF parse_dimacs_file(const std::string& path) {
    return parse_dimacs_text(read_file(path), path);
}

inline std::string serialize_dimacs(const Formula3CNF& F) {
    std::string out = "p cnf " + std::to_string(F.nvars) + " " + std::to_string(F.clauses.size()) + "\n";
    for (const auto& c : F.clauses)
        out += std::to_string(c[0]) + " " + std::to_string(c[1]) + " " + std::to_string(c[2]) + " 0\n";
    return out;
}

// ---- per-unit annotations (curve pieces with their corridor polylines) ----

struct UnitRecord {
    int id = -1;
    std::string kind;    // signal | stringing | holecurve
    std::string gadget;  // owning gadget, free text
    int lo = 0, hi = 0;  // f vertex index range [lo, hi)
    int wire = -1;       // shared side-choice group; -1 = fixed piece
    std::vector<Point> corridorT, corridorF, corridorF2;
};

inline std::vector<UnitRecord> parse_annotations_text(const std::string& text, int dim,
                                                      const std::string& name = "<annotations>") {
    detail::LineReader r(text, name);
    std::vector<UnitRecord> out;
    while (!r.done()) {
        auto toks = r.next("unit header");
        if (toks.size() != 2 || toks[0] != "unit") r.err("expected 'unit <id>'", r.line_no());
        UnitRecord u;
        u.id = static_cast<int>(detail::to_long(toks[1], r));
        bool ended = false;
        while (!ended) {
            auto t = r.next("unit field");
            if (t[0] == "end" && t.size() == 1) {
                ended = true;
            } else if (t[0] == "kind" && t.size() == 2) {
                u.kind = t[1];
            } else if (t[0] == "gadget" && t.size() >= 2) {
                for (std::size_t i = 1; i < t.size(); ++i) {
                    if (i > 1) u.gadget += " ";
                    u.gadget += t[i];
                }
            } else if (t[0] == "range" && t.size() == 3) {
                u.lo = static_cast<int>(detail::to_long(t[1], r));
                u.hi = static_cast<int>(detail::to_long(t[2], r));
            } else if (t[0] == "wire" && t.size() == 2) {
                u.wire = static_cast<int>(detail::to_long(t[1], r));
            } else if ((t[0] == "corridorT" || t[0] == "corridorF" || t[0] == "corridorF2") &&
                       t.size() == 2) {
                long n = detail::to_long(t[1], r);
                std::vector<Point>* dst = t[0] == "corridorT"   ? &u.corridorT
                                          : t[0] == "corridorF" ? &u.corridorF
                                                                : &u.corridorF2;
                for (long i = 0; i < n; ++i)
                    dst->push_back(detail::read_point(r.next("corridor point"), 0, dim, r));
            } else {
                r.err("unknown unit field '" + t[0] + "'", r.line_no());
            }
        }
        out.push_back(std::move(u));
    }
    return out;
}

inline std::string serialize_annotations(const std::vector<UnitRecord>& units) {
    std::string out;
    auto poly = [&](const char* tag, const std::vector<Point>& pts) {
        if (pts.empty() && std::string(tag) == "corridorF2") return;
        out += std::string(tag) + " " + std::to_string(pts.size()) + "\n";
        for (const auto& p : pts) out += detail::point_str(p) + "\n";
    };
    for (const auto& u : units) {
        out += "unit " + std::to_string(u.id) + "\n";
        out += "kind " + u.kind + "\n";
        out += "gadget " + u.gadget + "\n";
        out += "range " + std::to_string(u.lo) + " " + std::to_string(u.hi) + "\n";
        out += "wire " + std::to_string(u.wire) + "\n";
        poly("corridorT", u.corridorT);
        poly("corridorF", u.corridorF);
        poly("corridorF2", u.corridorF2);
        out += "end\n";
    }
    return out;
}

}  // namespace curvembed
