#include "cyberins/contract.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace cyberins {

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::A: return "A";
        case Scenario::B: return "B";
        case Scenario::C: return "C";
    }
    return "?";
}

std::string to_string(Mode m) { return m == Mode::monopoly ? "monopoly" : "fair_premium"; }

Scenario parse_scenario(const std::string& s) {
    if (s == "A") return Scenario::A;
    if (s == "B") return Scenario::B;
    if (s == "C") return Scenario::C;
    throw std::invalid_argument("unknown scenario '" + s + "'");
}

Mode parse_mode(const std::string& s) {
    if (s == "monopoly") return Mode::monopoly;
    if (s == "fair" || s == "fair_premium") return Mode::fair_premium;
    throw std::invalid_argument("unknown solver mode '" + s + "'");
}

double insurer_profit(const Contract& contract, const RiskFunction& risk, double x) {
    const double p = risk.value(x);
    return (1.0 - p) * contract.z - p * contract.c;
}

double fair_premium(const RiskFunction& risk, double c, double x) {
    const double p = risk.value(x);
    if (!(p < 1.0)) throw std::domain_error("fair_premium: loss probability must be below 1");
    return p * c / (1.0 - p);
}

const ClassOutcome* ContractSolution::find(const std::string& label) const {
    for (const auto& c : classes) {
        if (c.label == label) return &c;
    }
    return nullptr;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// A fair contract is accepted only if the premium fixed point actually
// zeroes the profit; a jump in the best response can leave a residual.
constexpr double kFairResidual = 1e-9;

using Vec = std::vector<double>;

struct Response {
    double x = 0.0;
    double eu = 0.0;
};

struct Point {
    bool feasible = false;
    double objective = kNegInf;
};

enum class Type { alpha, hc, lc };

std::string label_of(Type t) {
    switch (t) {
        case Type::alpha: return "alpha";
        case Type::hc: return "HC";
        case Type::lc: return "LC";
    }
    return "?";
}

struct Served {
    Type type;
    double weight;
};

class Evaluator {
public:
    explicit Evaluator(const MarketModel& model)
        : model_(model),
          alpha_(blend_alpha(model.mix)),
          hc_(model.mix.hc),
          lc_(model.mix.lc) {}

    const MarketModel& model() const { return model_; }
    double r() const { return model_.wealth.r; }

    const RiskFunction& risk(Type t) const {
        switch (t) {
            case Type::alpha: return alpha_;
            case Type::hc: return hc_;
            case Type::lc: return lc_;
        }
        return alpha_;
    }

    Response respond(Type t, const Contract& c) {
        ++calls;
        const auto br = best_response(model_.utility, risk(t), c, model_.s_nbr, model_.wealth,
                                      model_.agent);
        return {br.x_opt, br.eu_opt};
    }

    const Response& null_response(Type t) {
        auto& slot = null_[static_cast<int>(t)];
        if (!slot) slot = respond(t, kNullContract);
        return *slot;
    }

    double profit(Type t, const Contract& c, double x) const {
        return insurer_profit(c, risk(t), x);
    }

    bool admissible(const Contract& c) const { return c.invalid_field(model_.wealth).empty(); }

    long calls = 0;

private:
    const MarketModel& model_;
    RiskFunction alpha_;
    RiskFunction hc_;
    RiskFunction lc_;
    std::optional<Response> null_[3];
};

// Running maximum; the first candidate wins ties so enumeration order decides.
struct Incumbent {
    Vec v;
    double objective = kNegInf;
    bool found = false;

    bool offer(const Vec& cand, const Point& p) {
        if (p.feasible && (!found || p.objective > objective)) {
            v = cand;
            objective = p.objective;
            found = true;
            return true;
        }
        return false;
    }
};

struct NelderMeadResult {
    Vec v;
    double f = kNegInf;
    int iterations = 0;
};

// Maximizes f; infeasible points should evaluate to -inf.
NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& start,
                             double step, int max_iter, double xtol) {
    const std::size_t n = start.size();
    std::vector<Vec> pts(n + 1, start);
    std::vector<double> vals(n + 1);
    vals[0] = f(start);
    for (std::size_t k = 0; k < n; ++k) {
        pts[k + 1][k] += step;
        vals[k + 1] = f(pts[k + 1]);
        if (vals[k + 1] == kNegInf) {
            pts[k + 1][k] = start[k] - step;
            vals[k + 1] = f(pts[k + 1]);
        }
    }

    std::vector<std::size_t> order(n + 1);
    auto lerp = [](const Vec& a, const Vec& b, double t) {
        Vec out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
        return out;
    };

    int it = 0;
    for (; it < max_iter; ++it) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
        const Vec& best = pts[order[0]];
        double spread = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                spread = std::max(spread, std::abs(pts[order[k]][i] - best[i]));
            }
        }
        if (spread < xtol) break;

        Vec centroid(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[order[k]][i] / double(n);
        }
        const std::size_t worst = order[n];
        const double f_best = vals[order[0]];
        const double f_second = vals[order[n - 1]];
        const double f_worst = vals[worst];

        Vec xr = lerp(centroid, pts[worst], -1.0);
        const double fr = f(xr);
        if (fr > f_best) {
            Vec xe = lerp(centroid, pts[worst], -2.0);
            const double fe = f(xe);
            if (fe > fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr > f_second) {
            pts[worst] = xr;
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr > f_worst;
        Vec xc = outside ? lerp(centroid, xr, 0.5) : lerp(centroid, pts[worst], 0.5);
        const double fc = f(xc);
        if ((outside && fc >= fr) || (!outside && fc > f_worst)) {
            pts[worst] = xc;
            vals[worst] = fc;
            continue;
        }
        const Vec anchor = pts[order[0]];
        for (std::size_t k = 1; k <= n; ++k) {
            pts[order[k]] = lerp(anchor, pts[order[k]], 0.5);
            vals[order[k]] = f(pts[order[k]]);
        }
    }

    std::size_t arg = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        if (vals[k] > vals[arg]) arg = k;
    }
    return {pts[arg], vals[arg], it};
}

// Largest value of v[coord] in [v[coord], upper] for which pred holds,
// assuming pred holds at v and fails monotonically beyond some threshold.
Vec lift(const Vec& v, std::size_t coord, double upper, const std::function<bool(const Vec&)>& pred) {
    Vec probe = v;
    probe[coord] = upper;
    if (upper <= v[coord]) return v;
    if (pred(probe)) return probe;
    double lo = v[coord];
    double hi = upper;
    for (int k = 0; k < 64 && hi - lo > 1e-15 * std::max(1.0, hi); ++k) {
        const double mid = 0.5 * (lo + hi);
        probe[coord] = mid;
        if (pred(probe)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    probe[coord] = lo;
    return probe;
}

// Golden-section search for a maximum of f on [a, b]; the caller records the
// best point through f's side effects. Returns the iteration count.
int golden_section(const std::function<double(double)>& f, double a, double b, double tol) {
    constexpr double inv_phi = 0.6180339887498948482;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    int it = 0;
    for (; it < 100 && b - a > tol; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    f(a);
    f(b);
    return it;
}

std::vector<Served> served_types(Scenario scenario, const ClassMix& mix) {
    if (scenario == Scenario::A) return {{Type::alpha, 1.0}};
    std::vector<Served> out;
    if (mix.theta > 0.0) out.push_back({Type::hc, mix.theta});
    if (mix.theta < 1.0) out.push_back({Type::lc, 1.0 - mix.theta});
    return out;
}

// ---------------------------------------------------------------------------
// Single (pooling) contract programs: scenarios A and B, and the collapsed
// one-class version of C.
// ---------------------------------------------------------------------------

struct PoolingEval {
    Point point;
    std::vector<Response> responses;
};

PoolingEval eval_pooling(Evaluator& ev, const std::vector<Served>& served, const Contract& c,
                         Mode mode) {
    PoolingEval out;
    if (!ev.admissible(c)) return out;
    double profit = 0.0;
    double welfare = 0.0;
    bool ok = true;
    for (const auto& s : served) {
        const Response resp = ev.respond(s.type, c);
        out.responses.push_back(resp);
        if (resp.eu - ev.null_response(s.type).eu < 0.0) ok = false;
        profit += s.weight * ev.profit(s.type, c, resp.x);
        welfare += s.weight * resp.eu;
    }
    if (mode == Mode::fair_premium && std::abs(profit) > kFairResidual * ev.r()) ok = false;
    out.point.feasible = ok;
    out.point.objective = ok ? (mode == Mode::monopoly ? profit : welfare) : kNegInf;
    return out;
}

// Premium z solving z = G * sum_t w_t p_t(x_t(z, G - z)), i.e. zero expected
// profit across the served types for gross coverage G.
Contract fair_contract(Evaluator& ev, const std::vector<Served>& served, double gross) {
    if (gross <= 0.0) return kNullContract;
    double total_w = 0.0;
    for (const auto& s : served) total_w += s.weight;
    auto residual = [&](double z) {
        const Contract c{z, gross - z};
        double p_bar = 0.0;
        for (const auto& s : served) {
            const Response resp = ev.respond(s.type, c);
            p_bar += s.weight * ev.risk(s.type).value(resp.x);
        }
        return z - gross * p_bar / total_w;
    };
    double lo = 0.0;
    double hi = gross;
    double h_lo = residual(lo);
    double h_hi = residual(hi);
    if (h_lo >= 0.0) return kNullContract;
    for (int k = 0; k < 80; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double h_mid = residual(mid);
        if (h_mid < 0.0) {
            lo = mid;
            h_lo = h_mid;
        } else {
            hi = mid;
            h_hi = h_mid;
        }
    }
    const double z = std::abs(h_lo) <= std::abs(h_hi) ? lo : hi;
    return Contract{z, gross - z};
}

Contract monopoly_contract(const Vec& v) { return Contract{v[0], v[1]}; }

Contract single_program(Evaluator& ev, const std::vector<Served>& served, const SolverOptions& opts,
                        SolverDiagnostics& diag) {
    const double r = ev.r();
    Incumbent inc;

    if (opts.mode == Mode::monopoly) {
        const int n = opts.contract_grid;
        const double h = r / n;
        diag.grid_steps = n;
        auto eval = [&](const Vec& v) {
            ++diag.candidates;
            const Point p = eval_pooling(ev, served, monopoly_contract(v), opts.mode).point;
            if (p.feasible) ++diag.feasible_candidates;
            return p;
        };
        auto feasible = [&](const Vec& v) { return eval(v).feasible; };

        for (int i = 0; i <= n; ++i) {
            const double c = i == n ? r : i * h;
            for (int j = 0; i + j <= n; ++j) {
                const double z = j * h;
                const Vec v{z, c};
                inc.offer(v, eval(v));
            }
            // Push the premium up to the binding participation constraint.
            const Vec base{0.0, c};
            if (feasible(base)) {
                const Vec lifted = lift(base, 0, r - c, feasible);
                inc.offer(lifted, eval(lifted));
            }
        }

        auto f = [&](const Vec& v) {
            const Point p = eval(v);
            return p.feasible ? p.objective : kNegInf;
        };
        for (int round = 0; round < 2 && inc.found; ++round) {
            const auto nm = nelder_mead(f, inc.v, 0.5 * h, opts.refine_iterations, 1e-10 * r);
            diag.refinement_steps += nm.iterations;
            inc.offer(nm.v, eval(nm.v));
            const Vec lifted = lift(inc.v, 0, r - inc.v[1], feasible);
            if (inc.offer(lifted, eval(lifted))) ++diag.lifts;
        }

        // Golden section in c along the binding participation constraint.
        if (inc.found) {
            auto along = [&](double c) {
                const Vec base{0.0, c};
                if (!feasible(base)) return kNegInf;
                const Vec lifted = lift(base, 0, r - c, feasible);
                const Point p = eval(lifted);
                if (inc.offer(lifted, p)) ++diag.lifts;
                return p.feasible ? p.objective : kNegInf;
            };
            diag.refinement_steps += golden_section(along, std::max(0.0, inc.v[1] - h),
                                                    std::min(r, inc.v[1] + h), 1e-10 * r);
        }
        return inc.found ? monopoly_contract(inc.v) : kNullContract;
    }

    // Fair premium: one degree of freedom, the gross coverage G in [0, r].
    const int m = opts.fair_grid;
    diag.grid_steps = m;
    auto eval_g = [&](double g) {
        ++diag.candidates;
        if (!(g >= 0.0 && g <= r)) return Point{};
        const Point p = eval_pooling(ev, served, fair_contract(ev, served, g), opts.mode).point;
        if (p.feasible) ++diag.feasible_candidates;
        return p;
    };
    std::vector<double> grid_val(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) {
        const double g = k == m ? r : k * (r / m);
        const Point p = eval_g(g);
        grid_val[static_cast<std::size_t>(k)] = p.feasible ? p.objective : kNegInf;
        inc.offer({g}, p);
    }
    if (inc.found) {
        // Golden-section refinement on the neighbouring grid cells.
        const double g0 = inc.v[0];
        double a = std::max(0.0, g0 - r / m);
        double b = std::min(r, g0 + r / m);
        constexpr double inv_phi = 0.6180339887498948482;
        auto fval = [&](double g) {
            const Point p = eval_g(g);
            inc.offer({g}, p);
            return p.feasible ? p.objective : kNegInf;
        };
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = fval(c);
        double fd = fval(d);
        while (b - a > 1e-11 * r && diag.refinement_steps < opts.refine_iterations) {
            if (fc >= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = fval(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = fval(d);
            }
            ++diag.refinement_steps;
        }
    }
    return inc.found ? fair_contract(ev, served, inc.v[0]) : kNullContract;
}

// ---------------------------------------------------------------------------
// Scenario C menu (C_LC, C_HC).
// ---------------------------------------------------------------------------

struct MenuEval {
    Point point;
    Response lc, hc, hc_on_lc, lc_on_hc;
};

MenuEval eval_menu(Evaluator& ev, double theta, const Contract& lc, const Contract& hc, Mode mode) {
    MenuEval out;
    if (!ev.admissible(lc) || !ev.admissible(hc)) return out;
    out.lc = ev.respond(Type::lc, lc);
    out.hc = ev.respond(Type::hc, hc);
    out.hc_on_lc = ev.respond(Type::hc, lc);
    out.lc_on_hc = ev.respond(Type::lc, hc);
    const bool ir = out.lc.eu - ev.null_response(Type::lc).eu >= 0.0 &&
                    out.hc.eu - ev.null_response(Type::hc).eu >= 0.0;
    const bool ic = out.hc.eu - out.hc_on_lc.eu >= 0.0 && out.lc.eu - out.lc_on_hc.eu >= 0.0;
    const double p_lc = ev.profit(Type::lc, lc, out.lc.x);
    const double p_hc = ev.profit(Type::hc, hc, out.hc.x);
    bool ok = ir && ic;
    if (mode == Mode::fair_premium &&
        (std::abs(p_lc) > kFairResidual * ev.r() || std::abs(p_hc) > kFairResidual * ev.r())) {
        ok = false;
    }
    out.point.feasible = ok;
    if (ok) {
        out.point.objective = mode == Mode::monopoly
                                  ? theta * p_hc + (1.0 - theta) * p_lc
                                  : theta * out.hc.eu + (1.0 - theta) * out.lc.eu;
    }
    return out;
}

std::pair<Contract, Contract> menu_monopoly(Evaluator& ev, double theta, const SolverOptions& opts,
                                            SolverDiagnostics& diag) {
    const double r = ev.r();
    const int n = opts.contract_grid;
    const double h = r / n;
    diag.grid_steps = n;

    // v = (z_LC, c_LC, z_HC, c_HC)
    auto to_pair = [](const Vec& v) {
        return std::make_pair(Contract{v[0], v[1]}, Contract{v[2], v[3]});
    };
    auto eval = [&](const Vec& v) {
        ++diag.candidates;
        auto [lc, hc] = to_pair(v);
        const Point p = eval_menu(ev, theta, lc, hc, Mode::monopoly).point;
        if (p.feasible) ++diag.feasible_candidates;
        return p;
    };
    auto feasible = [&](const Vec& v) { return eval(v).feasible; };
    Incumbent inc;

    // Enumerate all grid menus using cached per-contract responses.
    struct Cell {
        Contract c;
        Response hc, lc;
    };
    std::vector<Cell> cells;
    for (int i = 0; i <= n; ++i) {
        const double c = i == n ? r : i * h;
        for (int j = 0; i + j <= n; ++j) {
            Contract k{j * h, c};
            cells.push_back({k, ev.respond(Type::hc, k), ev.respond(Type::lc, k)});
        }
    }
    const double null_hc = ev.null_response(Type::hc).eu;
    const double null_lc = ev.null_response(Type::lc).eu;
    std::size_t best_l = 0;
    std::size_t best_h = 0;
    double best_obj = kNegInf;
    for (std::size_t l = 0; l < cells.size(); ++l) {
        const Cell& L = cells[l];
        if (L.lc.eu - null_lc < 0.0) continue;
        const double p_lc = ev.profit(Type::lc, L.c, L.lc.x);
        for (std::size_t k = 0; k < cells.size(); ++k) {
            const Cell& H = cells[k];
            if (H.hc.eu - null_hc < 0.0) continue;
            if (H.hc.eu - L.hc.eu < 0.0 || L.lc.eu - H.lc.eu < 0.0) continue;
            const double obj = theta * ev.profit(Type::hc, H.c, H.hc.x) + (1.0 - theta) * p_lc;
            if (obj > best_obj) {
                best_obj = obj;
                best_l = l;
                best_h = k;
            }
        }
    }
    diag.candidates += static_cast<long>(cells.size() * cells.size());
    if (best_obj > kNegInf) {
        const Vec v{cells[best_l].c.z, cells[best_l].c.c, cells[best_h].c.z, cells[best_h].c.c};
        inc.offer(v, eval(v));
    }

    // Constructed menus: LC premium at its participation bound, then the HC
    // premium as high as HC participation and HC incentive compatibility allow.
    for (int i = 0; i <= n; ++i) {
        const double c_lc = i == n ? r : i * h;
        auto ir_lc = [&](const Vec& v) {
            const Contract k{v[0], v[1]};
            return ev.admissible(k) && ev.respond(Type::lc, k).eu - null_lc >= 0.0;
        };
        const Vec lc_v = lift({0.0, c_lc}, 0, r - c_lc, ir_lc);
        const Contract lc{lc_v[0], lc_v[1]};
        const double hc_on_lc = ev.respond(Type::hc, lc).eu;
        for (int k = 0; k <= n; ++k) {
            const double c_hc = k == n ? r : k * h;
            auto hc_side = [&](const Vec& v) {
                const Contract hc{v[2], v[3]};
                if (!ev.admissible(hc)) return false;
                const double eu = ev.respond(Type::hc, hc).eu;
                return eu - null_hc >= 0.0 && eu - hc_on_lc >= 0.0;
            };
            const Vec start{lc.z, lc.c, 0.0, c_hc};
            if (!hc_side(start)) continue;
            const Vec v = lift(start, 2, r - c_hc, hc_side);
            inc.offer(v, eval(v));
        }
    }

    auto f = [&](const Vec& v) {
        const Point p = eval(v);
        return p.feasible ? p.objective : kNegInf;
    };
    for (int round = 0; round < 2 && inc.found; ++round) {
        const auto nm = nelder_mead(f, inc.v, 0.5 * h, opts.refine_iterations, 1e-10 * r);
        diag.refinement_steps += nm.iterations;
        inc.offer(nm.v, eval(nm.v));
        for (std::size_t coord : {std::size_t{0}, std::size_t{2}}) {
            const Vec lifted = lift(inc.v, coord, r - inc.v[coord + 1], feasible);
            if (inc.offer(lifted, eval(lifted))) ++diag.lifts;
        }

        // Each coverage in turn, with its premium lifted to the binding constraint.
        for (std::size_t coord : {std::size_t{3}, std::size_t{1}}) {
            const Vec anchor = inc.v;
            const Type own = coord == 3 ? Type::hc : Type::lc;
            const Contract other = coord == 3 ? Contract{anchor[0], anchor[1]}
                                              : Contract{anchor[2], anchor[3]};
            const double own_on_other = ev.respond(own, other).eu;
            const double own_null = own == Type::hc ? null_hc : null_lc;
            // The type's own participation and incentive constraints, both
            // monotone in its premium.
            auto own_side = [&](const Vec& v) {
                const Contract k{v[coord - 1], v[coord]};
                if (!ev.admissible(k)) return false;
                const double eu = ev.respond(own, k).eu;
                return eu - own_null >= 0.0 && eu - own_on_other >= 0.0;
            };
            auto along = [&](double c) {
                Vec v = anchor;
                v[coord] = c;
                v[coord - 1] = 0.0;
                if (!own_side(v)) return kNegInf;
                const Vec lifted = lift(v, coord - 1, r - c, own_side);
                const Point p = eval(lifted);
                if (inc.offer(lifted, p)) ++diag.lifts;
                return p.feasible ? p.objective : kNegInf;
            };
            diag.refinement_steps += golden_section(along, std::max(0.0, anchor[coord] - h),
                                                    std::min(r, anchor[coord] + h), 1e-10 * r);
        }
    }
    if (!inc.found) return {kNullContract, kNullContract};
    return to_pair(inc.v);
}

std::pair<Contract, Contract> menu_fair(Evaluator& ev, double theta, const SolverOptions& opts,
                                        SolverDiagnostics& diag) {
    const double r = ev.r();
    const int m = opts.fair_grid_2d;
    diag.grid_steps = m;
    const std::vector<Served> only_lc{{Type::lc, 1.0}};
    const std::vector<Served> only_hc{{Type::hc, 1.0}};

    auto contracts_of = [&](const Vec& v) {
        return std::make_pair(fair_contract(ev, only_lc, v[0]), fair_contract(ev, only_hc, v[1]));
    };
    auto eval = [&](const Vec& v) {
        ++diag.candidates;
        if (!(v[0] >= 0.0 && v[0] <= r && v[1] >= 0.0 && v[1] <= r)) return Point{};
        auto [lc, hc] = contracts_of(v);
        const Point p = eval_menu(ev, theta, lc, hc, Mode::fair_premium).point;
        if (p.feasible) ++diag.feasible_candidates;
        return p;
    };
    auto feasible = [&](const Vec& v) { return eval(v).feasible; };
    Incumbent inc;

    struct Row {
        double g;
        Contract lc, hc;
        Response lc_own, hc_own, hc_on_lc, lc_on_hc;
    };
    std::vector<Row> rows;
    for (int k = 0; k <= m; ++k) {
        const double g = k == m ? r : k * (r / m);
        Row row{g, fair_contract(ev, only_lc, g), fair_contract(ev, only_hc, g), {}, {}, {}, {}};
        row.lc_own = ev.respond(Type::lc, row.lc);
        row.hc_own = ev.respond(Type::hc, row.hc);
        row.hc_on_lc = ev.respond(Type::hc, row.lc);
        row.lc_on_hc = ev.respond(Type::lc, row.hc);
        rows.push_back(row);
    }
    const double null_hc = ev.null_response(Type::hc).eu;
    const double null_lc = ev.null_response(Type::lc).eu;
    auto fair_ok = [&](Type t, const Contract& c, double x) {
        return std::abs(ev.profit(t, c, x)) <= kFairResidual * r;
    };
    double best_obj = kNegInf;
    Vec best_v;
    for (const Row& L : rows) {
        if (L.lc_own.eu - null_lc < 0.0 || !fair_ok(Type::lc, L.lc, L.lc_own.x)) continue;
        for (const Row& H : rows) {
            if (H.hc_own.eu - null_hc < 0.0 || !fair_ok(Type::hc, H.hc, H.hc_own.x)) continue;
            if (H.hc_own.eu - L.hc_on_lc.eu < 0.0 || L.lc_own.eu - H.lc_on_hc.eu < 0.0) continue;
            const double obj = theta * H.hc_own.eu + (1.0 - theta) * L.lc_own.eu;
            if (obj > best_obj) {
                best_obj = obj;
                best_v = {L.g, H.g};
            }
        }
    }
    diag.candidates += static_cast<long>(rows.size() * rows.size());
    if (!best_v.empty()) inc.offer(best_v, eval(best_v));

    auto f = [&](const Vec& v) {
        const Point p = eval(v);
        return p.feasible ? p.objective : kNegInf;
    };
    for (int round = 0; round < 2 && inc.found; ++round) {
        const auto nm = nelder_mead(f, inc.v, 0.5 * r / m, opts.refine_iterations, 1e-10 * r);
        diag.refinement_steps += nm.iterations;
        inc.offer(nm.v, eval(nm.v));
        // LC coverage is typically held down by HC's incentive constraint.
        const Vec lifted = lift(inc.v, 0, r, feasible);
        if (inc.offer(lifted, eval(lifted))) ++diag.lifts;
    }
    if (!inc.found) return {kNullContract, kNullContract};
    return contracts_of(inc.v);
}

// ---------------------------------------------------------------------------
// Assemble the reported solution from the chosen contracts.
// ---------------------------------------------------------------------------

ClassOutcome outcome_for(Evaluator& ev, Type t, double weight, const Contract& c) {
    ClassOutcome o;
    o.label = label_of(t);
    o.weight = weight;
    o.contract = c;
    const Response resp = ev.respond(t, c);
    const Response& null = ev.null_response(t);
    o.x = resp.x;
    o.eu = resp.eu;
    o.x_null = null.x;
    o.eu_null = null.eu;
    o.ir_slack = resp.eu - null.eu;
    o.profit = ev.profit(t, c, resp.x);
    return o;
}

void finish(ContractSolution& sol, Evaluator& ev, const SolverOptions& opts) {
    const double r = ev.r();
    bool ok = true;
    bool covered = false;
    double profit = 0.0;
    double welfare = 0.0;
    for (const auto& o : sol.classes) {
        if (o.ir_slack < 0.0) ok = false;
        if (o.contract.gross() > 1e-9 * r) covered = true;
        profit += o.weight * o.profit;
        welfare += o.weight * o.eu;
    }
    if (sol.ic_slack_hc && *sol.ic_slack_hc < 0.0) ok = false;
    if (sol.ic_slack_lc && *sol.ic_slack_lc < 0.0) ok = false;
    if (opts.mode == Mode::fair_premium) {
        for (const auto& o : sol.classes) {
            if (sol.scenario == Scenario::C && std::abs(o.profit) > kFairResidual * r) ok = false;
        }
        if (std::abs(profit) > kFairResidual * r) ok = false;
    }
    sol.feasible = ok;
    sol.market = ok && covered;
    sol.mandatory_contradiction = opts.mandatory && !sol.market;
    sol.insurer_profit = profit;
    sol.objective = opts.mode == Mode::monopoly ? profit : welfare;
    sol.diagnostics.best_responses = ev.calls;
}

void check_model(const MarketModel& model) {
    if (auto f = model.utility.invalid_field(); !f.empty()) {
        throw std::invalid_argument("utility." + f + " is invalid");
    }
    if (auto f = model.wealth.invalid_field(); !f.empty()) {
        throw std::invalid_argument("wealth." + f + " is invalid");
    }
    if (!(model.mix.theta >= 0.0 && model.mix.theta <= 1.0)) {
        throw std::invalid_argument("classes.theta must lie in [0, 1]");
    }
    if (!(model.s_nbr >= 0.0)) throw std::invalid_argument("s_nbr must be non-negative");
}

ContractSolution solve_pooling(Scenario scenario, const MarketModel& model,
                               const SolverOptions& opts) {
    check_model(model);
    Evaluator ev(model);
    ContractSolution sol;
    sol.scenario = scenario;
    sol.mode = opts.mode;
    const auto served = served_types(scenario, model.mix);
    const Contract c = single_program(ev, served, opts, sol.diagnostics);
    sol.contract_hc = c;
    sol.contract_lc = c;
    for (const auto& s : served) sol.classes.push_back(outcome_for(ev, s.type, s.weight, c));
    if (scenario == Scenario::B) sol.vi = value_of_information(model, c);
    finish(sol, ev, opts);
    return sol;
}

}  // namespace

ContractSolution optimize_scenario_A(const MarketModel& model, const SolverOptions& opts) {
    return solve_pooling(Scenario::A, model, opts);
}

ContractSolution optimize_scenario_B(const MarketModel& model, const SolverOptions& opts) {
    return solve_pooling(Scenario::B, model, opts);
}

ContractSolution optimize_scenario_C(const MarketModel& model, const SolverOptions& opts) {
    check_model(model);
    const double theta = model.mix.theta;
    if (theta == 0.0 || theta == 1.0) {
        // One class absent: the menu collapses to that class's own program.
        ContractSolution sol = solve_pooling(Scenario::B, model, opts);
        sol.scenario = Scenario::C;
        sol.vi = value_of_information(model, sol.contract_lc, sol.contract_hc);
        return sol;
    }

    Evaluator ev(model);
    ContractSolution sol;
    sol.scenario = Scenario::C;
    sol.mode = opts.mode;
    const auto [lc, hc] = opts.mode == Mode::monopoly ? menu_monopoly(ev, theta, opts, sol.diagnostics)
                                                      : menu_fair(ev, theta, opts, sol.diagnostics);
    sol.contract_lc = lc;
    sol.contract_hc = hc;
    sol.classes.push_back(outcome_for(ev, Type::hc, theta, hc));
    sol.classes.push_back(outcome_for(ev, Type::lc, 1.0 - theta, lc));
    sol.ic_slack_hc = sol.classes[0].eu - ev.respond(Type::hc, lc).eu;
    sol.ic_slack_lc = sol.classes[1].eu - ev.respond(Type::lc, hc).eu;
    sol.vi = value_of_information(model, lc, hc);
    finish(sol, ev, opts);
    return sol;
}

ContractSolution optimize(Scenario scenario, const MarketModel& model, const SolverOptions& opts) {
    switch (scenario) {
        case Scenario::A: return optimize_scenario_A(model, opts);
        case Scenario::B: return optimize_scenario_B(model, opts);
        case Scenario::C: return optimize_scenario_C(model, opts);
    }
    throw std::invalid_argument("unknown scenario");
}

double value_of_information(const MarketModel& model, const Contract& contract) {
    return value_of_information(model, contract, contract);
}

double value_of_information(const MarketModel& model, const Contract& lc, const Contract& hc) {
    const double theta = model.mix.theta;
    auto eu = [&](const RiskFunction& risk, const Contract& c) {
        return best_response(model.utility, risk, c, model.s_nbr, model.wealth, model.agent).eu_opt;
    };
    const double eu_hc = eu(model.mix.risk(RiskClass::HC), hc);
    const double eu_lc = eu(model.mix.risk(RiskClass::LC), lc);
    const double eu_alpha = eu(blend_alpha(model.mix), lc);
    return theta * eu_hc + (1.0 - theta) * eu_lc - eu_alpha;
}

std::vector<std::string> verify_solution(const MarketModel& model, const ContractSolution& sol,
                                         double reproduce_tol) {
    std::vector<std::string> issues;
    const double r = model.wealth.r;
    auto near = [&](double a, double b) { return std::abs(a - b) <= reproduce_tol; };
    auto risk_of = [&](const std::string& label) {
        if (label == "HC") return model.mix.risk(RiskClass::HC);
        if (label == "LC") return model.mix.risk(RiskClass::LC);
        return blend_alpha(model.mix);
    };
    auto br = [&](const RiskFunction& risk, const Contract& c) {
        return best_response(model.utility, risk, c, model.s_nbr, model.wealth, model.agent);
    };

    for (const Contract* c : {&sol.contract_hc, &sol.contract_lc}) {
        if (auto f = c->invalid_field(model.wealth); !f.empty()) {
            issues.push_back("contract field " + f + " inadmissible");
        }
    }
    if (sol.scenario != Scenario::C && !(sol.contract_hc == sol.contract_lc)) {
        issues.push_back("pooling scenario returned two different contracts");
    }
    double profit = 0.0;
    for (const auto& o : sol.classes) {
        const RiskFunction risk = risk_of(o.label);
        const auto own = br(risk, o.contract);
        const auto null = br(risk, kNullContract);
        if (!near(own.x_opt, o.x)) issues.push_back(o.label + ": induced investment not reproduced");
        if (!near(own.eu_opt, o.eu)) issues.push_back(o.label + ": expected utility not reproduced");
        if (!near(null.x_opt, o.x_null)) issues.push_back(o.label + ": baseline investment not reproduced");
        if (!near(own.eu_opt - null.eu_opt, o.ir_slack)) issues.push_back(o.label + ": IR slack not reproduced");
        if (!near(insurer_profit(o.contract, risk, own.x_opt), o.profit)) {
            issues.push_back(o.label + ": profit not reproduced");
        }
        if (o.ir_slack < -1e-9) issues.push_back(o.label + ": participation violated");
        profit += o.weight * o.profit;
    }
    if (!near(profit, sol.insurer_profit)) issues.push_back("insurer profit not reproduced");
    if (sol.mode == Mode::fair_premium && std::abs(sol.insurer_profit) > 1e-6 * r) {
        issues.push_back("fair-premium solution has non-zero profit");
    }
    if (sol.scenario == Scenario::C && sol.ic_slack_hc && sol.ic_slack_lc) {
        const auto* hc = sol.find("HC");
        const auto* lc = sol.find("LC");
        if (hc && lc) {
            const double ic_hc = hc->eu - br(model.mix.risk(RiskClass::HC), sol.contract_lc).eu_opt;
            const double ic_lc = lc->eu - br(model.mix.risk(RiskClass::LC), sol.contract_hc).eu_opt;
            if (!near(ic_hc, *sol.ic_slack_hc) || !near(ic_lc, *sol.ic_slack_lc)) {
                issues.push_back("IC slacks not reproduced");
            }
        }
        if (*sol.ic_slack_hc < -1e-9 || *sol.ic_slack_lc < -1e-9) {
            issues.push_back("incentive compatibility violated");
        }
    }
    if (sol.vi) {
        const double vi = value_of_information(model, sol.contract_lc, sol.contract_hc);
        if (!near(vi, *sol.vi)) issues.push_back("VI not reproduced");
        if (*sol.vi < -1e-9) issues.push_back("negative value of information");
    }
    return issues;
}

}  // namespace cyberins
