#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sailkit/classify2.hpp"
#include "sailkit/sail2d.hpp"
#include "sailkit/sail3.hpp"

namespace sailkit::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "sailkit.report/1";

enum Exit { Decided = 0, SelftestFailed = 1, DomainError = 2, Inconclusive = 3 };

// ---------------------------------------------------------------- parsing

/// Bracketed rows ("[[2,1],[1,1]]") or plain rows separated by newlines or ';'.
inline IntMatrix parse_matrix_text(const std::string& text) {
    std::vector<std::vector<BigInt>> rows;
    auto bad = [&](const std::string& why) { fail(ErrorKind::Parse, "cannot parse matrix: " + why); };
    auto read_int = [&](size_t& i) {
        size_t start = i;
        if (text[i] == '-' || text[i] == '+') ++i;
        size_t digits = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == digits) bad("expected an integer at offset " + std::to_string(start));
        std::string tok = text.substr(start, i - start);
        if (tok[0] == '+') tok.erase(0, 1);
        return BigInt(tok);
    };
    if (text.find('[') != std::string::npos) {
        int depth = 0;
        for (size_t i = 0; i < text.size();) {
            char c = text[i];
            if (c == '[') {
                ++depth;
                if (depth > 2) bad("nesting deeper than two levels");
                if (depth == 2) rows.emplace_back();
                ++i;
            } else if (c == ']') {
                if (--depth < 0) bad("unbalanced brackets");
                ++i;
            } else if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
                if (depth != 2) bad("entry outside a row");
                rows.back().push_back(read_int(i));
            } else {
                bad(std::string("unexpected character '") + c + "'");
            }
        }
        if (depth != 0) bad("unbalanced brackets");
    } else {
        rows.emplace_back();
        for (size_t i = 0; i < text.size();) {
            char c = text[i];
            if (c == '\n' || c == ';') {
                if (!rows.back().empty()) rows.emplace_back();
                ++i;
            } else if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else {
                rows.back().push_back(read_int(i));
            }
        }
        if (rows.back().empty()) rows.pop_back();
    }
    if (rows.empty()) bad("no rows");
    const size_t n = rows.size();
    for (const auto& r : rows)
        if (r.size() != n) bad("matrix must be square");
    IntMatrix m(static_cast<int>(n), static_cast<int>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return m;
}

/// "-" reads the input stream, a leading '[' is inline, anything else is a file path.
inline IntMatrix read_matrix(const std::string& arg, std::istream& in) {
    if (arg == "-") {
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_matrix_text(ss.str());
    }
    size_t first = arg.find_first_not_of(" \t");
    if (first != std::string::npos && arg[first] == '[') return parse_matrix_text(arg);
    std::ifstream f(arg);
    if (!f) fail(ErrorKind::Parse, "not an inline [[...]] matrix or a readable file: " + arg);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_matrix_text(ss.str());
}

inline long max_radius_cap() {
    const char* env = std::getenv("SAILKIT_MAX_RADIUS");
    if (!env || !*env) return 200;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 2) fail(ErrorKind::Parse, "SAILKIT_MAX_RADIUS must be an integer >= 2");
    return v;
}

inline void check_radius(long r, const char* what) {
    long cap = max_radius_cap();
    if (r > cap)
        fail(ErrorKind::Domain, std::string(what) + " " + std::to_string(r) + " exceeds SAILKIT_MAX_RADIUS = " + std::to_string(cap));
}

// ---------------------------------------------------------------- json helpers

inline json to_json(const BigInt& v) {
    if (v.fits_slong_p()) return v.get_si();
    return v.get_str();
}

inline json to_json(const std::vector<BigInt>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

inline json to_json(const IntMatrix& m) {
    json a = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        a.push_back(row);
    }
    return a;
}

inline json to_json(const QuadraticSurd& s) {
    return json{{"p", to_json(s.p())}, {"q", to_json(s.q())}, {"r", to_json(s.r())}, {"d", to_json(s.radicand())}, {"text", s.str()}};
}

inline json to_json(const P3& p) { return json::array({p[0], p[1], p[2]}); }

inline json to_json(const FundamentalDomain3& fd) {
    json cells = json::array();
    for (const auto& c : fd.cells) {
        json verts = json::array();
        for (const auto& v : c.vertices) verts.push_back(to_json(v));
        cells.push_back(json{{"vertices", verts}, {"record", c.record}});
    }
    return json{{"radius", fd.radius}, {"cells", cells}};
}

inline json to_json(const Invariant3& inv) {
    return json{{"class", to_string(inv.cls)}, {"parts", inv.parts}, {"radius", inv.radius}, {"text", inv.str()}};
}

inline std::string orthant_text(const std::array<int, 3>& s) {
    std::string out;
    for (int x : s) out += x > 0 ? '+' : '-';
    return out;
}

inline std::array<int, 3> parse_orthant(const std::string& s) {
    if (s.size() != 3) fail(ErrorKind::Parse, "orthant must be three signs like +-+");
    std::array<int, 3> out{};
    for (int i = 0; i < 3; ++i) {
        if (s[i] == '+') out[i] = 1;
        else if (s[i] == '-') out[i] = -1;
        else fail(ErrorKind::Parse, "orthant must be three signs like +-+");
    }
    return out;
}

/// Exact re-check of a conjugacy witness before it is printed.
inline void reverify(const IntMatrix& a, const IntMatrix& b, const IntMatrix& c, bool sl) {
    if (!verify_witness(a, b, c, sl)) fail(ErrorKind::Internal, "witness failed re-verification; refusing to report it");
}

inline int exit_for(Status3 s) { return s == Status3::Inconclusive ? Inconclusive : Decided; }

struct Outcome {
    json result;
    int code = Decided;
    std::string summary;
};

// ---------------------------------------------------------------- commands

inline Outcome cmd_cf(const IntMatrix& a) {
    QuadraticSurd w = slope_of_expanding_eigenvector(a);
    CFExpansion e = cf_expand(w);
    Outcome o;
    o.result = json{{"omega", to_json(w)}, {"preperiod", to_json(e.preperiod)}, {"period", to_json(e.period)}, {"q", e.q()}};
    o.summary = "omega = " + w.str() + ", period " + PeriodWord(e.period).str() + ", q = " + std::to_string(e.q());
    return o;
}

inline Outcome cmd_classify(const IntMatrix& a, const IntMatrix& b, Group group, long search_bound, long radius) {
    if (a.n() != b.n()) fail(ErrorKind::Domain, "matrices have different dimensions");
    Outcome o;
    if (a.n() == 2) {
        Verdict2 v = decide2(a, b, group);
        if (v.conjugate) reverify(a, b, *v.witness, group == Group::SL);
        o.result = json{{"dimension", 2},
                        {"group", group == Group::GL ? "gl" : "sl"},
                        {"verdict", v.conjugate ? "conjugate" : "not_conjugate"},
                        {"reason", to_string(v.reason)},
                        {"witness", v.witness ? to_json(*v.witness) : json(nullptr)},
                        {"witness_verified", bool(v.witness)}};
        if (v.reason != Reason::CharpolyMismatch) {
            o.result["period_a"] = to_json(v.period_a.word());
            o.result["period_b"] = to_json(v.period_b.word());
            o.result["q"] = v.q;
        }
        o.summary = std::string(v.conjugate ? "conjugate" : "not conjugate") + " in " + to_string(group) + "(2,Z): " + to_string(v.reason);
        return o;
    }
    if (a.n() != 3) fail(ErrorKind::Domain, "only 2x2 and 3x3 matrices are supported");
    if (search_bound < 1) fail(ErrorKind::Domain, "--search-bound must be positive");
    check_radius(radius, "--radius");
    Verdict3 v = decide_conjugacy3(a, b, search_bound, radius);
    if (v.witness && group == Group::SL && det(*v.witness) == -1) v.witness = -*v.witness;  // odd dimension
    if (v.witness) reverify(a, b, *v.witness, group == Group::SL);
    o.result = json{{"dimension", 3},
                    {"group", group == Group::GL ? "gl" : "sl"},
                    {"verdict", to_string(v.status)},
                    {"reason", v.reason},
                    {"witness", v.witness ? to_json(*v.witness) : json(nullptr)},
                    {"witness_verified", bool(v.witness)},
                    {"spectrum_a", v.cls_a ? json(to_string(*v.cls_a)) : json(nullptr)},
                    {"spectrum_b", v.cls_b ? json(to_string(*v.cls_b)) : json(nullptr)},
                    {"invariant_a", v.inv_a ? to_json(*v.inv_a) : json(nullptr)},
                    {"invariant_b", v.inv_b ? to_json(*v.inv_b) : json(nullptr)},
                    {"search_bound", v.search_bound},
                    {"scanned", v.scanned},
                    {"max_radius", radius}};
    o.code = exit_for(v.status);
    o.summary = std::string(to_string(v.status)) + ": " + v.reason;
    return o;
}

inline void write_obj(const std::string& path, const KleinSailPatch& p) {
    std::ofstream f(path);
    if (!f) fail(ErrorKind::Domain, "cannot write OBJ file: " + path);
    f << "# sailkit klein sail patch, orthant " << orthant_text(p.cone.sigma) << ", radius " << p.radius << ", certified faces\n";
    for (const auto& v : p.points) f << "v " << v[0] << " " << v[1] << " " << v[2] << "\n";
    for (const auto& face : p.faces) {
        if (!face.certified) continue;
        for (size_t i = 1; i + 1 < face.verts.size(); ++i)
            f << "f " << face.verts[0] + 1 << " " << face.verts[i] + 1 << " " << face.verts[i + 1] + 1 << "\n";
    }
}

inline Outcome cmd_sail(const IntMatrix& a, long window, long radius, int component, const std::string& orthant, const std::string& obj) {
    Outcome o;
    if (a.n() == 2) {
        if (!obj.empty()) fail(ErrorKind::Domain, "--export-obj needs a 3x3 matrix with three real eigenvalues");
        if (window < 3) fail(ErrorKind::Domain, "--window must be >= 3");
        SailChain2D chain = sail_vertices(a, static_cast<size_t>(window));
        json verts = json::array();
        for (const auto& v : chain.vertices) verts.push_back(json::array({to_json(v.x), to_json(v.y)}));
        LlsPeriod lp = lls_period_detail(a);
        PeriodWord cfp = period_of(cf_expand(slope_of_expanding_eigenvector(a)));
        o.result = json{{"dimension", 2},
                        {"window", window},
                        {"vertices", verts},
                        {"lls", to_json(chain.lls)},
                        {"lls_period", to_json(lp.word.word())},
                        {"cf_period", to_json(cfp.word())},
                        {"periods_agree", lp.word == cfp}};
        o.summary = "LLS period " + lp.word.str() + ", CF period " + cfp.str();
        return o;
    }
    if (a.n() != 3) fail(ErrorKind::Domain, "only 2x2 and 3x3 matrices are supported");
    check_radius(radius, "--radius");
    SpectrumClass cls = classify_spectrum(a);
    long cap = max_radius_cap();
    if (cls == SpectrumClass::Klein) {
        auto sigma = parse_orthant(orthant);
        KleinSailPatch p = klein_sail_patch(a, sigma, radius);
        DirichletGens g = dirichlet_generators(a);
        json verts = json::array(), faces = json::array();
        for (const auto& v : p.points) verts.push_back(to_json(v));
        for (const auto& f : p.faces)
            faces.push_back(json{{"normal", to_json(f.normal)}, {"offset", f.offset}, {"vertices", f.verts}, {"certified", f.certified}});
        json gens = json::array();
        for (const auto& m : g.gens) gens.push_back(to_json(m));
        json stability = nullptr;
        if (2 * radius <= cap) {
            KleinSailPatch q = klein_sail_patch(a, sigma, 2 * radius);
            std::set<P3> later;
            for (int v : q.certified_vertices()) later.insert(q.points[v]);
            bool same = true;
            for (int v : p.certified_vertices()) same = same && later.count(p.points[v]);
            stability = json{{"radius", 2 * radius}, {"certified_vertices_reproduced", same}};
        }
        ActionCheck act = certify_generator_action(p, g.gens);
        FundamentalDomain3 fd = klein_fundamental_domain(p, g);
        Invariant3 inv = invariant3(a, cap);
        o.result = json{{"dimension", 3},
                        {"spectrum", "klein"},
                        {"orthant", orthant_text(sigma)},
                        {"radius", radius},
                        {"patch", json{{"vertices", verts}, {"faces", faces}, {"certified_faces", p.certified_face_count()}, {"certified_vertices", p.certified_vertices().size()}}},
                        {"generators", gens},
                        {"generator_action", json{{"vertices", act.vertices}, {"images", act.images}, {"failures", act.failures}}},
                        {"stability", stability},
                        {"fundamental_domain", to_json(fd)},
                        {"invariant", to_json(inv)}};
        if (!obj.empty()) {
            write_obj(obj, p);
            o.result["obj"] = obj;
        }
        o.summary = "klein sail: " + std::to_string(p.certified_face_count()) + " certified faces, " + std::to_string(fd.cells.size()) + " face orbits";
        return o;
    }
    if (!obj.empty()) fail(ErrorKind::Domain, "--export-obj needs a 3x3 matrix with three real eigenvalues");
    KVFactorSail s = kv_factor_sail(a, component, radius);
    DirichletGens g = dirichlet_generators(a);
    json chain = json::array();
    for (const auto& p : s.chain) chain.push_back(json{{"rep", to_json(p.rep)}, {"x", p.proj.x_approx}, {"r", p.proj.r_approx}});
    json certified = json::array();
    for (bool b : s.edge_certified) certified.push_back(b);
    FundamentalDomain3 fd = kv_fundamental_domain(s, g);
    Invariant3 inv = invariant3(a, cap);
    o.result = json{{"dimension", 3},
                    {"spectrum", "klein_voronoi"},
                    {"component", component > 0 ? "+" : "-"},
                    {"bound", radius},
                    {"chain", chain},
                    {"edge_certified", certified},
                    {"generator", to_json(g.gens[0])},
                    {"fundamental_domain", to_json(fd)},
                    {"invariant", to_json(inv)}};
    o.summary = "factor-sail chain of " + std::to_string(s.chain.size()) + " points, period " + std::to_string(fd.cells[0].record[0]);
    return o;
}

inline Outcome cmd_oracle(const IntMatrix& a, const IntMatrix& b, long bound, bool det_plus_one) {
    if (bound < 0) fail(ErrorKind::Parse, "--bound must be non-negative");
    OracleResult r = brute_force_conjugator(a, b, bound, det_plus_one);
    if (r.witness) reverify(a, b, *r.witness, det_plus_one);
    Outcome o;
    o.result = json{{"bound", bound},
                    {"det", det_plus_one ? "+1" : "any"},
                    {"witness", r.witness ? to_json(*r.witness) : json(nullptr)},
                    {"witness_verified", bool(r.witness)},
                    {"scanned", r.scanned},
                    {"free_entries", r.free_entries}};
    o.summary = r.witness ? "witness " + r.witness->str() : "no witness with entries in [-" + std::to_string(bound) + ", " + std::to_string(bound) + "]";
    return o;
}

// ---------------------------------------------------------------- selftest

namespace detail {

struct Suite {
    std::string name;
    long cases = 0, passed = 0;
    json failures = json::array();
    void record(bool ok, json reproducer) {
        ++cases;
        if (ok) ++passed;
        else if (failures.size() < 5) failures.push_back(std::move(reproducer));
    }
};

/// Deterministic draws that do not depend on the standard library's distributions.
struct Draw {
    std::mt19937_64 rng;
    explicit Draw(std::uint64_t seed) : rng(seed) {}
    long range(long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }
    IntMatrix matrix(int n, long lim) {
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = range(-lim, lim);
        return m;
    }
    IntMatrix unimodular(int n, long lim) {
        while (true) {
            IntMatrix u = matrix(n, lim);
            if (abs(det(u)) == 1) return u;
        }
    }
    IntMatrix hyperbolic2(long lim) {
        while (true) {
            IntMatrix a = matrix(2, lim);
            BigInt d = det(a), t = a.trace();
            BigInt disc = t * t - 4 * d;
            if (abs(d) == 1 && disc > 0 && !is_perfect_square(disc)) return a;
        }
    }
};

} // namespace detail

inline Outcome cmd_selftest(std::uint64_t seed, long cases) {
    if (cases < 1) fail(ErrorKind::Domain, "--cases must be positive");
    const bool inject = std::getenv("SAILKIT_SELFTEST_INJECT") != nullptr;
    std::vector<detail::Suite> suites;
    auto guarded = [](detail::Suite& s, json repro, const std::function<bool()>& body) {
        bool ok = false;
        try {
            ok = body();
        } catch (const Error& e) {
            repro["error"] = e.what();
        }
        s.record(ok, repro);
    };

    {
        detail::Suite s{"cf.reconstruction"};
        detail::Draw d(seed * 8 + 1);
        while (s.cases < cases) {
            long rad = d.range(2, 300);
            if (is_perfect_square(BigInt(rad))) continue;
            long q = d.range(1, 9) * (d.range(0, 1) ? 1 : -1), r = d.range(1, 30) * (d.range(0, 1) ? 1 : -1);
            QuadraticSurd x = QuadraticSurd::make(BigInt(d.range(-40, 40)), BigInt(q), BigInt(r), BigInt(rad));
            guarded(s, json{{"surd", x.str()}}, [&] { return cf_value(cf_expand(x), x.radicand()) == x; });
        }
        suites.push_back(s);
    }
    {
        detail::Suite s{"cf.conjugation_invariance"};
        detail::Draw d(seed * 8 + 2);
        for (long i = 0; i < cases; ++i) {
            IntMatrix a = d.hyperbolic2(5), u = d.unimodular(2, 3);
            IntMatrix b = u * a * unimodular_inverse(u);
            guarded(s, json{{"a", a.str()}, {"u", u.str()}}, [&] {
                return period_of(cf_expand(slope_of_expanding_eigenvector(a))) == period_of(cf_expand(slope_of_expanding_eigenvector(b)));
            });
        }
        suites.push_back(s);
    }
    {
        detail::Suite s{"sail2d.lls_equals_cf"};
        detail::Draw d(seed * 8 + 3);
        for (long i = 0; i < cases; ++i) {
            IntMatrix a = d.hyperbolic2(6);
            guarded(s, json{{"a", a.str()}}, [&] {
                PeriodWord cf = period_of(cf_expand(slope_of_expanding_eigenvector(a)));
                PeriodWord lls = lls_period(a);
                if (inject) return lls == PeriodWord(std::vector<BigInt>{BigInt(0)});
                return lls == cf;
            });
        }
        suites.push_back(s);
    }
    {
        detail::Suite s{"classify2.witnesses"};
        detail::Draw d(seed * 8 + 4);
        for (long i = 0; i < cases; ++i) {
            IntMatrix a = d.hyperbolic2(5), u = d.unimodular(2, 3);
            IntMatrix b = u * a * unimodular_inverse(u);
            guarded(s, json{{"a", a.str()}, {"u", u.str()}}, [&] {
                Verdict2 gl = decide_gl2(a, b), sl = decide_sl2(a, b);
                if (!gl.conjugate || !verify_witness(a, b, *gl.witness)) return false;
                if (sl.conjugate && !verify_witness(a, b, *sl.witness, true)) return false;
                if (det(u) == 1 && !sl.conjugate) return false;
                return true;
            });
        }
        suites.push_back(s);
    }
    {
        // a negative verdict must never be contradicted by the exhaustive search
        detail::Suite s{"classify2.soundness_vs_oracle"};
        detail::Draw d(seed * 8 + 5);
        for (long i = 0; i < cases; ++i) {
            IntMatrix a = d.hyperbolic2(4);
            // companion matrix with the same characteristic polynomial, or its transpose
            IntMatrix b{{0, 0}, {1, 0}};
            b(0, 1) = -det(a);
            b(1, 1) = a.trace();
            if (d.range(0, 1)) b = b.transpose();
            guarded(s, json{{"a", a.str()}, {"b", b.str()}}, [&] {
                for (Group g : {Group::GL, Group::SL}) {
                    Verdict2 v = decide2(a, b, g);
                    OracleResult o = brute_force_conjugator(a, b, 6, g == Group::SL);
                    if (v.conjugate && !verify_witness(a, b, *v.witness, g == Group::SL)) return false;
                    if (!v.conjugate && o.witness) return false;
                }
                return true;
            });
        }
        suites.push_back(s);
    }
    {
        detail::Suite s{"intmat.charpoly_conjugation"};
        detail::Draw d(seed * 8 + 6);
        for (long i = 0; i < cases; ++i) {
            IntMatrix a = d.matrix(3, 5), u = d.unimodular(3, 3);
            guarded(s, json{{"a", a.str()}, {"u", u.str()}}, [&] {
                IntMatrix b = u * a * unimodular_inverse(u);
                return charpoly(a) == charpoly(b) && similar_over_Q(a, b);
            });
        }
        suites.push_back(s);
    }
    {
        detail::Suite s{"sail3.invariant_and_witness"};
        detail::Draw d(seed * 8 + 7);
        const std::vector<IntMatrix> bases{IntMatrix{{0, 0, 1}, {1, 0, 3}, {0, 1, 0}}, IntMatrix{{0, 0, 1}, {1, 0, 1}, {0, 1, 0}},
                                           IntMatrix{{-2, -2, -1}, {-2, 1, 0}, {1, 0, 0}}};
        std::vector<Invariant3> base_inv;
        for (const auto& m : bases) base_inv.push_back(invariant3(m));
        long n3 = std::max(3L, cases / 10);
        for (long i = 0; i < n3; ++i) {
            size_t k = static_cast<size_t>(i) % bases.size();
            IntMatrix u = d.unimodular(3, 3);
            IntMatrix b = u * bases[k] * unimodular_inverse(u);
            guarded(s, json{{"a", bases[k].str()}, {"u", u.str()}}, [&] {
                if (!(invariant3(b) == base_inv[k])) return false;
                Verdict3 v = decide_conjugacy3(bases[k], b, 50);
                return v.status == Status3::Conjugate && verify_witness(bases[k], b, *v.witness);
            });
        }
        suites.push_back(s);
    }

    Outcome o;
    json arr = json::array();
    bool all = true;
    std::string summary;
    for (const auto& s : suites) {
        all = all && s.passed == s.cases;
        arr.push_back(json{{"name", s.name}, {"cases", s.cases}, {"passed", s.passed}, {"failures", s.failures}});
        summary += s.name + " " + std::to_string(s.passed) + "/" + std::to_string(s.cases) + "\n";
    }
    o.result = json{{"seed", seed}, {"cases", cases}, {"suites", arr}, {"passed", all}};
    o.code = all ? Decided : SelftestFailed;
    o.summary = summary + (all ? "selftest passed" : "selftest FAILED");
    return o;
}

// ---------------------------------------------------------------- entry point

inline int run(const std::vector<std::string>& argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Integer conjugacy of hyperbolic matrices via continued fractions and sails", "sailkit"};
    bool as_json = true, quiet = false, timing = false;
    app.add_flag("--json,!--no-json", as_json, "JSON report on stdout (default on)");
    app.add_flag("--quiet", quiet, "suppress the human summary on stderr");
    app.add_flag("--timing", timing, "add wall-clock timing to the report");
    app.require_subcommand(1);
    app.fallthrough();

    std::string ma, mb, group = "gl", det_mode = "any", orthant = "+++", component = "+", obj;
    long search_bound = 50, radius = -1, window = 8, bound = 10, cases = 50;
    std::uint64_t seed = 42;

    auto* cf = app.add_subcommand("cf", "continued fraction of the expanding eigenvector slope (2x2)");
    cf->add_option("matrix", ma, "matrix: inline [[..]], file path, or - for stdin")->required();

    auto* classify = app.add_subcommand("classify", "decide integer conjugacy of two matrices");
    classify->add_option("a", ma, "first matrix")->required();
    classify->add_option("b", mb, "second matrix")->required();
    classify->add_option("--search-bound", search_bound, "coefficient bound of the witness scan (3x3)");
    classify->add_option("--radius", radius, "largest enumeration radius for sail invariants (3x3)");
    classify->add_option("--group", group, "gl or sl")->check(CLI::IsMember({"gl", "sl"}));

    auto* sail = app.add_subcommand("sail", "sail vertices and invariants");
    sail->add_option("matrix", ma, "matrix")->required();
    sail->add_option("--window", window, "number of sail vertices (2x2)");
    sail->add_option("--radius", radius, "enumeration radius or bound (3x3)");
    sail->add_option("--component", component, "factor-sail component + or - (one real eigenvalue)")->check(CLI::IsMember({"+", "-"}));
    sail->add_option("--orthant", orthant, "orthant sign pattern such as ++- (three real eigenvalues)");
    sail->add_option("--export-obj", obj, "write certified faces as an OBJ mesh");

    auto* oracle = app.add_subcommand("oracle", "exhaustive bounded search for a conjugating matrix");
    oracle->add_option("a", ma, "first matrix")->required();
    oracle->add_option("b", mb, "second matrix")->required();
    oracle->add_option("--bound", bound, "entry bound");
    oracle->add_option("--det", det_mode, "+1 or any")->check(CLI::IsMember({"+1", "any"}));

    auto* selftest = app.add_subcommand("selftest", "seeded property checks over every module");
    selftest->add_option("--seed", seed, "random seed");
    selftest->add_option("--cases", cases, "cases per suite");

    std::string command;
    json args;
    auto emit_error = [&](const std::string& kind, const std::string& msg) {
        if (as_json) out << json{{"schema", kSchema}, {"command", command}, {"error", json{{"kind", kind}, {"message", msg}}}}.dump(2) << "\n";
        if (!quiet || !as_json) err << "error (" << kind << "): " << msg << "\n";
    };
    try {
        std::vector<std::string> rev(argv.rbegin(), argv.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Decided;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help();
        return Decided;
    } catch (const CLI::ParseError& e) {
        emit_error("parse", e.what());
        return DomainError;
    }

    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    json input;
    try {
        if (*cf) {
            command = "cf";
            IntMatrix a = read_matrix(ma, in);
            input = json{{"matrix", to_json(a)}};
            o = cmd_cf(a);
        } else if (*classify) {
            command = "classify";
            IntMatrix a = read_matrix(ma, in), b = read_matrix(mb, in);
            long r = radius < 0 ? max_radius_cap() : radius;
            input = json{{"a", to_json(a)}, {"b", to_json(b)}};
            args = json{{"group", group}, {"search_bound", search_bound}, {"radius", r}};
            o = cmd_classify(a, b, group == "sl" ? Group::SL : Group::GL, search_bound, r);
        } else if (*sail) {
            command = "sail";
            IntMatrix a = read_matrix(ma, in);
            input = json{{"matrix", to_json(a)}};
            long r = radius;
            if (r < 0) r = (a.n() == 3 && classify_spectrum(a) == SpectrumClass::KleinVoronoi) ? 20 : 30;
            if (a.n() == 2) args = json{{"window", window}};
            else args = json{{"radius", r}, {"orthant", orthant}, {"component", component}, {"export_obj", obj.empty() ? json(nullptr) : json(obj)}};
            o = cmd_sail(a, window, r, component == "+" ? 1 : -1, orthant, obj);
        } else if (*oracle) {
            command = "oracle";
            IntMatrix a = read_matrix(ma, in), b = read_matrix(mb, in);
            input = json{{"a", to_json(a)}, {"b", to_json(b)}};
            args = json{{"bound", bound}, {"det", det_mode}};
            o = cmd_oracle(a, b, bound, det_mode == "+1");
        } else if (*selftest) {
            command = "selftest";
            args = json{{"seed", seed}, {"cases", cases}};
            o = cmd_selftest(seed, cases);
        }
    } catch (const Error& e) {
        std::string kind(to_string(e.kind()));
        std::string msg = e.what();
        if (e.kind() == ErrorKind::RegionTooSmall) msg += " (retry with a larger --radius)";
        emit_error(kind, msg);
        return DomainError;
    }
    json report{{"schema", kSchema}, {"command", command}, {"args", args.is_null() ? json::object() : args}, {"input", input.is_null() ? json::object() : input}, {"result", o.result}};
    if (timing) report["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (as_json) out << report.dump(2) << "\n";
    else out << o.summary << "\n";
    if (!quiet && as_json) err << o.summary << "\n";
    return o.code;
}

} // namespace sailkit::cli
