#include "fvporous/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fvporous {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

bool finite_all(std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

// ---------------------------------------------------------------------------
// h

CoefficientH CoefficientH::linear(double a) {
    require(finite_all({a}) && a > 0.0, "h family linear requires a > 0 (got a = " + num(a) + ")");
    CoefficientH h;
    h.family_ = Family::linear;
    h.a_ = a;
    h.lower_ = a;
    h.upper_ = a;
    return h;
}

CoefficientH CoefficientH::linear_plus_sin(double a, double c) {
    require(finite_all({a, c}) && c >= 0.0,
            "h family linear_plus_sin requires c >= 0 (got c = " + num(c) + ")");
    require(a > c, "h family linear_plus_sin requires a > c so that C_h1 = a - c > 0 (got a = " +
                       num(a) + ", c = " + num(c) + ")");
    CoefficientH h;
    h.family_ = Family::linear_plus_sin;
    h.a_ = a;
    h.c_ = c;
    h.lower_ = a - c;
    h.upper_ = a + c;
    return h;
}

CoefficientH CoefficientH::custom(std::function<double(double)> h, std::function<double(double)> dh,
                                  std::function<double(double)> d2h, double lower, double upper) {
    require(h && dh && d2h, "custom h needs h, h' and h''");
    require(finite_all({lower, upper}) && lower > 0.0 && upper >= lower,
            "custom h requires 0 < C_h1 <= C_h2");
    CoefficientH out;
    out.family_ = Family::custom;
    out.h_ = std::move(h);
    out.dh_ = std::move(dh);
    out.d2h_ = std::move(d2h);
    out.lower_ = lower;
    out.upper_ = upper;
    return out;
}

double CoefficientH::value(double v) const {
    switch (family_) {
    case Family::linear: return a_ * v;
    case Family::linear_plus_sin: return a_ * v + c_ * std::sin(v);
    case Family::custom: return h_(v);
    }
    return 0.0;
}

double CoefficientH::d1(double v) const {
    switch (family_) {
    case Family::linear: return a_;
    case Family::linear_plus_sin: return a_ + c_ * std::cos(v);
    case Family::custom: return dh_(v);
    }
    return 0.0;
}

double CoefficientH::d2(double v) const {
    switch (family_) {
    case Family::linear: return 0.0;
    case Family::linear_plus_sin: return -c_ * std::sin(v);
    case Family::custom: return d2h_(v);
    }
    return 0.0;
}

std::string CoefficientH::describe() const {
    switch (family_) {
    case Family::linear: return "linear(a=" + num(a_) + ")";
    case Family::linear_plus_sin: return "linear_plus_sin(a=" + num(a_) + ", c=" + num(c_) + ")";
    case Family::custom: return "custom";
    }
    return {};
}

// ---------------------------------------------------------------------------
// b

CoefficientB CoefficientB::constant(double c0) {
    require(finite_all({c0}) && c0 > 0.0, "b family const requires c0 > 0 (got c0 = " + num(c0) + ")");
    CoefficientB b;
    b.family_ = Family::constant;
    b.c0_ = c0;
    b.lower_ = c0;
    b.upper_ = c0;
    return b;
}

CoefficientB CoefficientB::offset_sin(double c0, double c1) {
    require(finite_all({c0, c1}) && c1 >= 0.0,
            "b family offset_sin requires c1 >= 0 (got c1 = " + num(c1) + ")");
    require(c0 > c1, "b family offset_sin requires c0 > c1 so that C_b1 = c0 - c1 > 0 (got c0 = " +
                         num(c0) + ", c1 = " + num(c1) + ")");
    CoefficientB b;
    b.family_ = Family::offset_sin;
    b.c0_ = c0;
    b.c1_ = c1;
    b.lower_ = c0 - c1;
    b.upper_ = c0 + c1;
    return b;
}

CoefficientB CoefficientB::custom(std::function<double(double)> b, std::function<double(double)> db,
                                  std::function<double(double)> d2b, double lower, double upper) {
    require(b && db && d2b, "custom b needs b, b' and b''");
    require(finite_all({lower, upper}) && lower > 0.0 && upper >= lower,
            "custom b requires 0 < C_b1 <= C_b2");
    CoefficientB out;
    out.family_ = Family::custom;
    out.b_ = std::move(b);
    out.db_ = std::move(db);
    out.d2b_ = std::move(d2b);
    out.lower_ = lower;
    out.upper_ = upper;
    return out;
}

double CoefficientB::value(double v) const {
    switch (family_) {
    case Family::constant: return c0_;
    case Family::offset_sin: return c0_ + c1_ * std::sin(v);
    case Family::custom: return b_(v);
    }
    return 0.0;
}

double CoefficientB::d1(double v) const {
    switch (family_) {
    case Family::constant: return 0.0;
    case Family::offset_sin: return c1_ * std::cos(v);
    case Family::custom: return db_(v);
    }
    return 0.0;
}

double CoefficientB::d2(double v) const {
    switch (family_) {
    case Family::constant: return 0.0;
    case Family::offset_sin: return -c1_ * std::sin(v);
    case Family::custom: return d2b_(v);
    }
    return 0.0;
}

std::string CoefficientB::describe() const {
    switch (family_) {
    case Family::constant: return "const(c0=" + num(c0_) + ")";
    case Family::offset_sin: return "offset_sin(c0=" + num(c0_) + ", c1=" + num(c1_) + ")";
    case Family::custom: return "custom";
    }
    return {};
}

// ---------------------------------------------------------------------------
// p

PressureField PressureField::zero() { return PressureField{}; }

PressureField PressureField::separable(double alpha, double k, double omega) {
    require(finite_all({alpha, k, omega}), "p family separable requires finite alpha, k, omega");
    require(k > 0.0, "p family separable requires k > 0 (got k = " + num(k) + ")");
    PressureField p;
    p.family_ = Family::separable;
    p.alpha_ = alpha;
    p.k_ = k;
    p.omega_ = omega;
    p.sup_ = std::abs(alpha);
    return p;
}

PressureField PressureField::custom(std::function<double(double, double)> p,
                                    std::function<double(double, double)> dt,
                                    std::function<double(double, double)> dx, double sup_bound) {
    require(p && dt && dx, "custom p needs p, dp/dt and dp/dx");
    require(std::isfinite(sup_bound) && sup_bound >= 0.0, "custom p requires a finite bound >= 0");
    PressureField out;
    out.family_ = Family::custom;
    out.p_ = std::move(p);
    out.pt_ = std::move(dt);
    out.px_ = std::move(dx);
    out.sup_ = sup_bound;
    return out;
}

double PressureField::value(double t, double x) const {
    switch (family_) {
    case Family::zero: return 0.0;
    case Family::separable: return alpha_ * std::sin(k_ * kPi * x) * std::cos(omega_ * t);
    case Family::custom: return p_(t, x);
    }
    return 0.0;
}

double PressureField::dt(double t, double x) const {
    switch (family_) {
    case Family::zero: return 0.0;
    case Family::separable: return -alpha_ * omega_ * std::sin(k_ * kPi * x) * std::sin(omega_ * t);
    case Family::custom: return pt_(t, x);
    }
    return 0.0;
}

double PressureField::dx(double t, double x) const {
    switch (family_) {
    case Family::zero: return 0.0;
    case Family::separable:
        return alpha_ * k_ * kPi * std::cos(k_ * kPi * x) * std::cos(omega_ * t);
    case Family::custom: return px_(t, x);
    }
    return 0.0;
}

CellField PressureField::shape_averages(const Grid& grid) const {
    switch (family_) {
    case Family::zero: return CellField(grid, 0.0);
    case Family::separable: {
        const double kpi = k_ * kPi;
        return cell_average_exact([kpi](double x) { return -std::cos(kpi * x) / kpi; }, grid);
    }
    case Family::custom: break;
    }
    throw std::logic_error("custom pressure fields are not separable");
}

double PressureField::amplitude(double t) const {
    switch (family_) {
    case Family::zero: return 0.0;
    case Family::separable: return alpha_ * std::cos(omega_ * t);
    case Family::custom: break;
    }
    throw std::logic_error("custom pressure fields are not separable");
}

CellField PressureField::cell_averages(const Grid& grid, double t) const {
    if (family_ == Family::custom) {
        return cell_average([this, t](double x) { return p_(t, x); }, grid);
    }
    CellField out = shape_averages(grid);
    const double a = amplitude(t);
    for (double& x : out.values()) x *= a;
    return out;
}

std::string PressureField::describe() const {
    switch (family_) {
    case Family::zero: return "zero";
    case Family::separable:
        return "separable(alpha=" + num(alpha_) + ", k=" + num(k_) + ", omega=" + num(omega_) + ")";
    case Family::custom: return "custom";
    }
    return {};
}

// ---------------------------------------------------------------------------
// v0

InitialData InitialData::constant(double c) {
    require(std::isfinite(c), "v0 family const requires a finite c");
    InitialData d;
    d.family_ = Family::constant;
    d.c_ = c;
    return d;
}

InitialData InitialData::cosine(std::vector<double> a) {
    require(!a.empty(), "v0 family cosine needs at least one coefficient");
    for (double x : a) require(std::isfinite(x), "v0 family cosine requires finite coefficients");
    InitialData d;
    d.family_ = Family::cosine;
    d.a_ = std::move(a);
    return d;
}

InitialData InitialData::custom(std::function<double(double)> v0, std::function<double(double)> dv0) {
    require(v0 && dv0, "custom v0 needs v0 and v0'");
    InitialData d;
    d.family_ = Family::custom;
    d.v0_ = std::move(v0);
    d.dv0_ = std::move(dv0);
    return d;
}

double InitialData::value(double x) const {
    switch (family_) {
    case Family::constant: return c_;
    case Family::cosine: {
        double s = 0.0;
        for (std::size_t m = 0; m < a_.size(); ++m) s += a_[m] * std::cos(static_cast<double>(m) * kPi * x);
        return s;
    }
    case Family::custom: return v0_(x);
    }
    return 0.0;
}

double InitialData::d1(double x) const {
    switch (family_) {
    case Family::constant: return 0.0;
    case Family::cosine: {
        double s = 0.0;
        for (std::size_t m = 1; m < a_.size(); ++m) {
            const double mpi = static_cast<double>(m) * kPi;
            s -= a_[m] * mpi * std::sin(mpi * x);
        }
        return s;
    }
    case Family::custom: return dv0_(x);
    }
    return 0.0;
}

CellField InitialData::cell_averages(const Grid& grid) const {
    switch (family_) {
    case Family::constant: return CellField(grid, c_);
    case Family::cosine: {
        if (a_.size() == 1) return CellField(grid, a_[0]);
        CellField out = cell_average_exact(
            [this](double x) {
                double s = 0.0;
                for (std::size_t m = 1; m < a_.size(); ++m) {
                    const double mpi = static_cast<double>(m) * kPi;
                    s += a_[m] * std::sin(mpi * x) / mpi;
                }
                return s;
            },
            grid);
        for (double& x : out.values()) x += a_[0];
        return out;
    }
    case Family::custom: return cell_average(v0_, grid);
    }
    return CellField(grid);
}

std::string InitialData::describe() const {
    switch (family_) {
    case Family::constant: return "const(c=" + num(c_) + ")";
    case Family::cosine: {
        std::string s = "cosine(a=[";
        for (std::size_t m = 0; m < a_.size(); ++m) s += (m ? ", " : "") + num(a_[m]);
        return s + "])";
    }
    case Family::custom: return "custom";
    }
    return {};
}

// ---------------------------------------------------------------------------

CellField p_cell_averages(const ProblemSpec& spec, const Grid& grid, double t) {
    const double slack = 1e-12 * std::max(1.0, spec.T);
    if (!(t >= -slack && t <= spec.T + slack)) {
        throw std::out_of_range("pressure requested at t = " + num(t) + " outside [0, " + num(spec.T) + "]");
    }
    return spec.p.cell_averages(grid, t);
}

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.passed; });
}

std::string VerificationReport::failures() const {
    std::string out;
    for (const BoundCheck& c : checks) {
        if (c.passed) continue;
        if (!out.empty()) out += '\n';
        out += "violated " + c.name + ": declared " + num(c.declared) + ", observed " + num(c.observed) +
               " at witness " + num(c.witness);
        if (c.name.find("p(t,x)") != std::string::npos) out += " (t = " + num(c.witness_t) + ")";
    }
    return out;
}

VerificationReport verify_assumptions(const ProblemSpec& spec, int samples) {
    if (samples < 100) throw std::invalid_argument("verify_assumptions needs at least 100 samples");
    const auto [lo, hi] = spec.verify_range;
    if (!(lo < hi)) throw std::invalid_argument("verification range must satisfy lo < hi");

    struct Extreme {
        double value;
        double at;
    };
    auto track_min = [](Extreme& e, double value, double at) {
        if (value < e.value || std::isnan(value)) e = {value, at};
    };
    auto track_max = [](Extreme& e, double value, double at) {
        if (value > e.value || std::isnan(value)) e = {value, at};
    };

    const double inf = std::numeric_limits<double>::infinity();
    Extreme dh_min{inf, lo}, dh_max{-inf, lo}, d2h_abs{-inf, lo};
    Extreme b_min{inf, lo}, b_max{-inf, lo}, db_abs{-inf, lo}, d2b_abs{-inf, lo};
    for (int j = 0; j < samples; ++j) {
        const double v = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(samples - 1);
        const double dh = spec.h.d1(v);
        track_min(dh_min, dh, v);
        track_max(dh_max, dh, v);
        track_max(d2h_abs, std::abs(spec.h.d2(v)), v);
        const double b = spec.b.value(v);
        track_min(b_min, b, v);
        track_max(b_max, b, v);
        track_max(db_abs, std::abs(spec.b.d1(v)), v);
        track_max(d2b_abs, std::abs(spec.b.d2(v)), v);
    }

    const int per_axis = std::max(10, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(samples)))));
    Extreme p_abs{-inf, 0.0};
    double p_abs_t = 0.0;
    Extreme v0_abs{-inf, 0.0};
    for (int a = 0; a < per_axis; ++a) {
        const double x = static_cast<double>(a) / static_cast<double>(per_axis - 1);
        const double v0 = std::abs(spec.v0.value(x));
        if (!std::isfinite(v0) || v0 > v0_abs.value) v0_abs = {v0, x};
        for (int k = 0; k < per_axis; ++k) {
            const double t = spec.T * static_cast<double>(k) / static_cast<double>(per_axis - 1);
            const double p = std::abs(spec.p.value(t, x));
            if (!std::isfinite(p) || p > p_abs.value) {
                p_abs = {p, x};
                p_abs_t = t;
            }
        }
    }

    auto slack = [](double declared) { return 1e-12 * std::max(1.0, std::abs(declared)); };
    auto upper = [&](std::string name, double declared, Extreme e) {
        return BoundCheck{std::move(name), declared, e.value, e.at, 0.0,
                          std::isfinite(e.value) && e.value <= declared + slack(declared)};
    };
    auto lower = [&](std::string name, double declared, Extreme e) {
        return BoundCheck{std::move(name), declared, e.value, e.at, 0.0,
                          std::isfinite(e.value) && e.value >= declared - slack(declared)};
    };

    VerificationReport report;
    report.checks.push_back(lower("h'(v) >= C_h1", spec.h.lower(), dh_min));
    report.checks.push_back(upper("h'(v) <= C_h2", spec.h.upper(), dh_max));
    report.checks.push_back(upper("|h''(v)| <= C_h2", spec.h.upper(), d2h_abs));
    report.checks.push_back(lower("b(v) >= C_b1", spec.b.lower(), b_min));
    report.checks.push_back(upper("b(v) <= C_b2", spec.b.upper(), b_max));
    report.checks.push_back(upper("|b'(v)| <= C_b2", spec.b.upper(), db_abs));
    report.checks.push_back(upper("|b''(v)| <= C_b2", spec.b.upper(), d2b_abs));
    BoundCheck p_check = upper("|p(t,x)| <= p_inf", spec.p.sup_bound(), p_abs);
    p_check.witness_t = p_abs_t;
    report.checks.push_back(p_check);
    report.checks.push_back(upper("|v0(x)| finite", inf, v0_abs));
    return report;
}

ProblemPtr make_problem(ProblemSpec spec) {
    require(std::isfinite(spec.T) && spec.T > 0.0, "horizon T must be positive (got T = " + num(spec.T) + ")");
    const VerificationReport report = verify_assumptions(spec, 1000);
    if (!report.passed()) throw std::invalid_argument(report.failures());
    return std::make_shared<const ProblemSpec>(std::move(spec));
}

}  // namespace fvporous
