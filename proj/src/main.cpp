// padsig: certified p-adic sigma and zeta series for ordinary Weierstrass
// curves, plus the canonical lifting data they are built on.
//
// Subcommands
//   sigma   certified sigma series and the constant beta behind it
//   zeta    certified zeta series and beta
//   beta    beta and the Hasse value alone
//   lift    quotient data: coefficient images, kernel polynomial, the
//           isogeny parameter t' and its unit part; --iterate chains steps
//   verify  identity suite; exit 0 iff nothing failed
//   expand  raw curve expansions x, y, w, W
//
// Exit codes: 0 success, 1 malformed request or failed verification,
// 2 curve not ordinary at p, 3 precision exhausted even after the
// automatic retry.  Output is assembled in memory and written to stdout
// in a single call, so an interrupted run never emits a torn document.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "padsig/pipeline.hpp"

namespace {

using nlohmann::ordered_json;
using namespace padsig;

struct Cli {
    int64_t p = 5;
    std::string a4 = "0";
    std::string a6 = "0";
    bool universal = false;
    int e = 2;
    int M = 20;
    int qdeg = 8;
    std::string checks;
    bool json = false;
    int iterate = 1;
};

const std::vector<std::string> kCheckIds = {"ode",    "quadratic", "lemma9", "beta",
                                            "ladder", "prop8",     "fel",    "commute",
                                            "qexp",   "hasse",     "stability"};

void parse_ratio(const std::string& s, int64_t& num, int64_t& den) {
    try {
        size_t used = 0;
        const size_t slash = s.find('/');
        if (slash == std::string::npos) {
            num = std::stoll(s, &used);
            den = 1;
            if (used != s.size()) throw std::invalid_argument(s);
        } else {
            num = std::stoll(s.substr(0, slash), &used);
            if (used != slash) throw std::invalid_argument(s);
            const std::string ds = s.substr(slash + 1);
            den = std::stoll(ds, &used);
            if (used != ds.size()) throw std::invalid_argument(s);
        }
    } catch (const config_error&) {
        throw;
    } catch (const std::exception&) {
        throw config_error("cannot parse '" + s + "' as a rational (expected n or n/d)");
    }
}

JobConfig job_of(const Cli& o) {
    JobConfig cfg;
    cfg.p = o.p;
    cfg.universal = o.universal;
    parse_ratio(o.a4, cfg.a4_num, cfg.a4_den);
    parse_ratio(o.a6, cfg.a6_num, cfg.a6_den);
    cfg.e_target = o.e;
    cfg.M = o.M;
    cfg.qdeg = o.qdeg;
    cfg.iterate = o.iterate;
    if (!o.checks.empty()) {
        std::string cur;
        for (char c : o.checks + ",") {
            if (c == ',') {
                if (!cur.empty()) {
                    if (std::find(kCheckIds.begin(), kCheckIds.end(), cur) == kCheckIds.end()) {
                        std::string all;
                        for (const auto& id : kCheckIds) all += (all.empty() ? "" : ", ") + id;
                        throw config_error("unknown check '" + cur + "' (valid: " + all + ")");
                    }
                    cfg.checks.push_back(cur);
                    cur.clear();
                }
            } else {
                cur += c;
            }
        }
    }
    validate(cfg);
    return cfg;
}

// ---- document model -------------------------------------------------------

struct Entry {
    int degree = 0;
    std::string value;
    int cert = 0; // certified digits
    int weight = 0;
    bool has_weight = false;
};

struct Block {
    std::string name;
    std::vector<Entry> entries;
};

struct Document {
    int64_t p = 0;
    bool universal = false;
    std::vector<Block> series;
    std::vector<CheckReport> checks;
    bool with_checks = false;
};

Entry entry_of(int deg, const PadicScalar& v) {
    Entry e;
    e.degree = deg;
    e.cert = v.abs_prec();
    if (v.known_zero())
        e.value = "0";
    else if (v.shift() >= 0)
        e.value = std::to_string(v.residue(e.cert));
    else
        e.value = "p^" + std::to_string(v.shift()) + " * " + std::to_string(v.mantissa());
    return e;
}

Entry entry_of(int deg, const UnivScalar& u) {
    Entry e;
    e.degree = deg;
    e.cert = u.abs_prec();
    e.weight = u.weight();
    e.has_weight = true;
    std::string s;
    if (u.num().empty()) {
        s = "0";
    } else {
        bool first = true;
        for (const auto& m : u.num()) {
            if (!first) s += " + ";
            first = false;
            s += std::to_string(m.c);
            if (m.a) s += "*A4^" + std::to_string(m.a);
            if (m.b) s += "*A6^" + std::to_string(m.b);
        }
    }
    if (u.h_den()) s += " / H^" + std::to_string(u.h_den());
    if (u.p_den()) s += " / p^" + std::to_string(u.p_den());
    e.value = s;
    return e;
}

template <class S>
Block block_of(std::string name, const TruncSeries<S>& s) {
    Block b;
    b.name = std::move(name);
    for (int n = s.lo(); n <= s.stored_top(); ++n) b.entries.push_back(entry_of(n, s.coeff(n)));
    return b;
}

template <class S>
Block block_scalar(std::string name, const S& v) {
    Block b;
    b.name = std::move(name);
    b.entries.push_back(entry_of(0, v));
    return b;
}

template <class S>
Block block_xpoly(std::string name, const XPoly<S>& f) {
    Block b;
    b.name = std::move(name);
    for (int i = 0; i <= f.degree(); ++i) b.entries.push_back(entry_of(i, f.coeff(i)));
    return b;
}

std::string fmt_mod(int64_t p, int cert) {
    return std::to_string(p) + "^" + std::to_string(cert);
}

std::string render_json(const Document& d) {
    ordered_json doc;
    doc["p"] = d.p;
    doc["mode"] = d.universal ? "universal" : "specialized";
    if (d.universal) {
        ordered_json w = ordered_json::object();
        for (const auto& b : d.series) {
            ordered_json arr = ordered_json::array();
            for (const auto& e : b.entries) arr.push_back({e.degree, e.weight});
            w[b.name] = arr;
        }
        doc["weights"] = w;
    }
    ordered_json ser = ordered_json::object();
    for (const auto& b : d.series) {
        ordered_json arr = ordered_json::array();
        for (const auto& e : b.entries) arr.push_back({e.degree, e.value, fmt_mod(d.p, e.cert)});
        ser[b.name] = arr;
    }
    doc["series"] = ser;
    if (d.with_checks) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : d.checks) {
            ordered_json c;
            c["id"] = r.id;
            c["status"] = r.status;
            c["certified"] = r.certified;
            if (!r.witness.empty()) c["witness"] = r.witness;
            arr.push_back(c);
        }
        doc["checks"] = arr;
    }
    return doc.dump(2) + "\n";
}

std::string pad_to(std::string s, size_t w) {
    while (s.size() < w) s += ' ';
    return s;
}

std::string render_text(const Document& d) {
    std::string out = "p = " + std::to_string(d.p) +
                      "   mode = " + (d.universal ? "universal" : "specialized") + "\n";
    for (const auto& b : d.series) {
        out += "\n" + b.name + ":\n";
        size_t wd = 0, wv = 0;
        for (const auto& e : b.entries) {
            wd = std::max(wd, 2 + std::to_string(e.degree).size());
            wv = std::max(wv, e.value.size());
        }
        for (const auto& e : b.entries) {
            out += "  " + pad_to("t^" + std::to_string(e.degree), wd) + "  " +
                   pad_to(e.value, wv) + "  mod " + fmt_mod(d.p, e.cert);
            if (e.has_weight) out += "  weight " + std::to_string(e.weight);
            out += "\n";
        }
    }
    if (d.with_checks) {
        out += "\nchecks:\n";
        size_t wi = 0, ws = 0;
        for (const auto& r : d.checks) {
            wi = std::max(wi, r.id.size());
            ws = std::max(ws, r.status.size());
        }
        for (const auto& r : d.checks) {
            out += "  " + pad_to(r.id, wi) + "  " + pad_to(r.status, ws) + "  " + r.certified;
            if (!r.witness.empty()) out += "  [" + r.witness + "]";
            out += "\n";
        }
    }
    return out;
}

void emit(const Document& d, bool json) {
    const std::string out = json ? render_json(d) : render_text(d);
    std::fwrite(out.data(), 1, out.size(), stdout);
    std::fflush(stdout);
}

// ---- subcommand handlers --------------------------------------------------

int cmd_series(const Cli& o, bool want_sigma) {
    const JobConfig cfg = job_of(o);
    ModulusContext ctx(cfg.p);
    Document d;
    d.p = cfg.p;
    d.universal = cfg.universal;
    if (cfg.universal) {
        UnivJob job = run_univ_job(ctx, cfg);
        d.series.push_back(block_scalar("beta", job.cert.beta));
        if (want_sigma)
            d.series.push_back(block_of("sigma", job.cert.sigma));
        else
            d.series.push_back(block_of("zeta", job.cert.zeta));
    } else {
        SigmaJob job = run_sigma_job(ctx, cfg);
        d.series.push_back(block_scalar("beta", job.cert.beta));
        if (want_sigma)
            d.series.push_back(block_of("sigma", job.cert.sigma));
        else
            d.series.push_back(block_of("zeta", job.cert.zeta));
    }
    emit(d, o.json);
    return 0;
}

int cmd_beta(const Cli& o) {
    const JobConfig cfg = job_of(o);
    ModulusContext ctx(cfg.p);
    const int level = std::max(cfg.e_target, 1);
    int64_t deg = 1;
    for (int i = 0; i < level; ++i) deg *= cfg.p;
    if (deg > 500000)
        throw config_error("digit target needs expansion depth " + std::to_string(deg));
    if (cfg.universal && deg > 700)
        throw config_error("universal beta at this target needs expansion depth " +
                           std::to_string(deg) + "; specialize the curve or lower the target");
    const int depth = int(deg) + 2;
    Document d;
    d.p = cfg.p;
    d.universal = cfg.universal;
    if (cfg.universal) {
        auto attempt = [&](int wide) {
            auto A4 = UnivScalar::A4(&ctx, wide);
            auto A6 = UnivScalar::A6(&ctx, wide);
            auto C = expand_deep(A4, A6, depth);
            return extract_beta(C, cfg.p, level);
        };
        auto b = pdetail::with_retry(attempt, level + 8, ctx.cap());
        d.series.push_back(block_scalar("beta", b.beta));
        d.series.push_back(block_scalar("hasse", UnivScalar::hasse(&ctx, level + 8)));
    } else {
        auto attempt = [&](int wide) {
            auto a4 = PadicScalar::from_ratio(&ctx, cfg.a4_num, cfg.a4_den, wide);
            auto a6 = PadicScalar::from_ratio(&ctx, cfg.a6_num, cfg.a6_den, wide);
            auto H = hasse_value(ctx, a4, a6);
            if (ring_known_zero(H) || ring_vp(H) > 0)
                throw not_a_unit_error("curve is supersingular at " + std::to_string(cfg.p) +
                                       ": Hasse value " + ring_str(H));
            auto C = expand_deep(a4, a6, depth);
            auto b = extract_beta(C, cfg.p, level);
            return std::make_pair(b, H);
        };
        auto [b, H] = pdetail::with_retry(attempt, level + 8, ctx.cap());
        d.series.push_back(block_scalar("beta", b.beta));
        d.series.push_back(block_scalar("hasse", H));
    }
    emit(d, o.json);
    return 0;
}

template <class S>
void append_lift_blocks(Document& d, const QuotientData<S>& Q, const std::string& sfx) {
    d.series.push_back(block_scalar("a4_image" + sfx, Q.a4q));
    d.series.push_back(block_scalar("a6_image" + sfx, Q.a6q));
    d.series.push_back(block_scalar("a4_image_modp" + sfx, ring_clamp(Q.a4q, 1)));
    d.series.push_back(block_scalar("a6_image_modp" + sfx, ring_clamp(Q.a6q, 1)));
    d.series.push_back(block_scalar("hasse_image" + sfx, Q.Hq));
    d.series.push_back(block_xpoly("kernel_poly" + sfx, Q.split.phi));
    d.series.push_back(block_of("t_image" + sfx, Q.tq));
    d.series.push_back(block_of("unit_part" + sfx, Q.uu));
}

int cmd_lift(const Cli& o) {
    const JobConfig cfg = job_of(o);
    ModulusContext ctx(cfg.p);
    Document d;
    d.p = cfg.p;
    d.universal = cfg.universal;
    const int win = std::max(8, std::min(cfg.M, 30));
    if (cfg.universal) {
        if (cfg.iterate > 1)
            throw config_error("universal lifts cannot be iterated: the image coefficients "
                               "are values, not a new pair of generators");
        const int wide = std::min(ctx.cap(), cfg.e_target + 22);
        auto attempt = [&](int w) {
            auto A4 = UnivScalar::A4(&ctx, w);
            auto A6 = UnivScalar::A6(&ctx, w);
            auto C = expand_deep(A4, A6, win + 2 * int(cfg.p) + 10);
            return quotient_curve(ctx, C, cfg.e_target + 4, win);
        };
        auto Q = pdetail::with_retry(attempt, wide, ctx.cap());
        append_lift_blocks(d, Q, "");
    } else {
        auto steps = run_lift_job(ctx, cfg, win);
        for (size_t i = 0; i < steps.size(); ++i) {
            const std::string sfx =
                steps.size() > 1 ? "_step" + std::to_string(i + 1) : std::string();
            append_lift_blocks(d, steps[i].Q, sfx);
        }
    }
    emit(d, o.json);
    return 0;
}

int cmd_verify(const Cli& o) {
    const JobConfig cfg = job_of(o);
    ModulusContext ctx(cfg.p);
    auto reports = run_check_suite(ctx, cfg);
    Document d;
    d.p = cfg.p;
    d.universal = cfg.universal;
    d.checks = reports;
    d.with_checks = true;
    emit(d, o.json);
    const bool all_ok =
        std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.ok(); });
    return all_ok ? 0 : 1;
}

int cmd_expand(const Cli& o) {
    const JobConfig cfg = job_of(o);
    ModulusContext ctx(cfg.p);
    const int wide = std::min(ctx.cap(), cfg.e_target + 6);
    Document d;
    d.p = cfg.p;
    d.universal = cfg.universal;
    auto push_all = [&](const auto& C) {
        d.series.push_back(block_of("w", C.w.truncated(cfg.M)));
        d.series.push_back(block_of("x", C.x.truncated(cfg.M)));
        d.series.push_back(block_of("y", C.y.truncated(cfg.M)));
        d.series.push_back(block_of("W", C.W.truncated(cfg.M)));
    };
    if (cfg.universal) {
        auto A4 = UnivScalar::A4(&ctx, wide);
        auto A6 = UnivScalar::A6(&ctx, wide);
        push_all(expand_deep(A4, A6, cfg.M));
    } else {
        auto a4 = PadicScalar::from_ratio(&ctx, cfg.a4_num, cfg.a4_den, wide);
        auto a6 = PadicScalar::from_ratio(&ctx, cfg.a6_num, cfg.a6_den, wide);
        push_all(expand_deep(a4, a6, cfg.M));
    }
    emit(d, o.json);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified p-adic sigma and zeta series for ordinary Weierstrass curves"};
    app.require_subcommand(1);
    Cli o;
    auto add_common = [&](CLI::App* s, bool with_iterate) {
        s->add_option("-p", o.p, "prime to work at (>= 5)");
        s->add_option("--a4", o.a4, "curve coefficient a4, integer or num/den");
        s->add_option("--a6", o.a6, "curve coefficient a6, integer or num/den");
        s->add_flag("--universal", o.universal, "use the universal two-parameter curve");
        s->add_option("-e,--prec", o.e, "certified digit target (modulus p^e)");
        s->add_option("-M,--tdeg", o.M, "series window: coefficients through t^M");
        s->add_option("--qdeg", o.qdeg, "q-expansion window for the verification suite");
        s->add_option("--checks", o.checks, "comma-separated list of checks to run");
        s->add_flag("--json", o.json, "emit a JSON document instead of tables");
        if (with_iterate)
            s->add_option("--iterate", o.iterate, "number of successive lifting steps");
    };
    auto* s_sigma = app.add_subcommand("sigma", "certified sigma series");
    auto* s_zeta = app.add_subcommand("zeta", "certified zeta series");
    auto* s_beta = app.add_subcommand("beta", "the constant beta and the Hasse value");
    auto* s_lift = app.add_subcommand("lift", "canonical quotient data");
    auto* s_verify = app.add_subcommand("verify", "run the identity suite");
    auto* s_expand = app.add_subcommand("expand", "raw curve expansions");
    add_common(s_sigma, false);
    add_common(s_zeta, false);
    add_common(s_beta, false);
    add_common(s_lift, true);
    add_common(s_verify, false);
    add_common(s_expand, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*s_sigma) return cmd_series(o, true);
        if (*s_zeta) return cmd_series(o, false);
        if (*s_beta) return cmd_beta(o);
        if (*s_lift) return cmd_lift(o);
        if (*s_verify) return cmd_verify(o);
        if (*s_expand) return cmd_expand(o);
    } catch (const config_error& e) {
        std::fprintf(stderr, "padsig: %s\n", e.what());
        return 1;
    } catch (const not_a_unit_error& e) {
        std::fprintf(stderr, "padsig: %s\n", e.what());
        return 2;
    } catch (const precision_error& e) {
        std::fprintf(stderr, "padsig: %s\n", e.what());
        return 3;
    } catch (const error& e) {
        std::fprintf(stderr, "padsig: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "padsig: %s\n", e.what());
        return 1;
    }
    return 1;
}
