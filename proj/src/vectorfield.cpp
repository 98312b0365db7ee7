#include "rotodeg/vectorfield.hpp"

#include <cmath>
#include <sstream>

#include "rotodeg/errors.hpp"

namespace rotodeg {

namespace {

struct ScenarioName {
    ScenarioId id;
    const char *name;
};

constexpr ScenarioName kScenarioNames[] = {
    {ScenarioId::rigid_rotation, "rigid_rotation"},
    {ScenarioId::example51, "example51"},
    {ScenarioId::linear_system, "linear_system"},
    {ScenarioId::duffing_superlinear, "duffing_superlinear"},
    {ScenarioId::asymlin_hamiltonian, "asymlin_hamiltonian"},
    {ScenarioId::expansive_spiral, "expansive_spiral"},
};

// Reduces t into [0, T).
double phase(double t, double period) {
    double s = std::fmod(t, period);
    if (s < 0.0) s += period;
    if (s >= period) s = 0.0;
    return s;
}

Mat2 clockwise_generator(double omega) {
    Mat2 m;
    m << 0.0, omega, -omega, 0.0;
    return m;
}

std::map<std::string, double> merged_params(const ScenarioSpec &spec) {
    auto params = default_params(spec.name);
    for (const auto &[key, value] : spec.params) {
        auto it = params.find(key);
        if (it == params.end()) {
            throw InvalidParams("scenario " + to_string(spec.name) + " has no parameter '" + key + "'");
        }
        if (!std::isfinite(value)) throw InvalidParams("parameter '" + key + "' is not finite");
        it->second = value;
    }
    if (params.at("T") <= 0.0) throw InvalidParams("period T must be positive");
    return params;
}

TimeVaryingField rigid_rotation(const std::map<std::string, double> &p) {
    const double omega = p.at("omega");
    TimeVaryingField f;
    f.period_T = p.at("T");
    f.rhs = [omega](double, const Vec2 &z) { return Vec2(omega * z.y(), -omega * z.x()); };
    f.lin_zero = [omega](double) { return clockwise_generator(omega); };
    f.lin_inf = f.lin_zero;
    return f;
}

TimeVaryingField example51(const std::map<std::string, double> &p) {
    const double tau = p.at("tau");
    const double period = p.at("T");
    if (!(tau > 0.0 && tau < period)) throw InvalidParams("example51 requires 0 < tau < T");

    Mat2 l_inf;
    l_inf << -1.0, 0.0, 0.0, 1.0;
    const Mat2 rotation = clockwise_generator(kTwoPi / tau);
    auto l_zero = [=](double t) -> Mat2 { return phase(t, period) < tau ? rotation : l_inf; };

    TimeVaryingField f;
    f.period_T = period;
    f.discontinuities = {tau};
    f.rhs = [=](double t, const Vec2 &z) -> Vec2 {
        const double r = z.norm();
        if (r >= 2.0) return l_inf * z;
        const Vec2 inner = l_zero(t) * z;
        if (r <= 1.5) return inner;
        const double s = smoothstep((r - 1.5) / 0.5);
        return (1.0 - s) * inner + s * (l_inf * z);
    };
    f.lin_zero = l_zero;
    f.lin_inf = [l_inf](double) { return l_inf; };
    return f;
}

TimeVaryingField linear_system(const std::map<std::string, double> &p) {
    Mat2 a;
    a << p.at("a11"), p.at("a12"), p.at("a21"), p.at("a22");
    TimeVaryingField f;
    f.period_T = p.at("T");
    f.rhs = [a](double, const Vec2 &z) -> Vec2 { return a * z; };
    f.lin_zero = [a](double) { return a; };
    f.lin_inf = f.lin_zero;
    return f;
}

TimeVaryingField duffing(const std::map<std::string, double> &p) {
    const double c = p.at("c");
    TimeVaryingField f;
    f.period_T = p.at("T");
    f.rhs = [c](double, const Vec2 &z) {
        const double u = z.x();
        return Vec2(z.y(), -c * u - u * u * u);
    };
    f.lin_zero = [c](double) {
        Mat2 m;
        m << 0.0, 1.0, -c, 0.0;
        return m;
    };
    return f;
}

// H(t, z) = ∫ω(|z|)|z| d|z| + eps cos(2πt/T) b(|z|) x y, flowing by ż = −J∇H.
TimeVaryingField asymlin_hamiltonian(const std::map<std::string, double> &p) {
    const double omega0 = p.at("omega0");
    const double omega_inf = p.at("omegainf");
    const double eps = p.at("eps");
    const double period = p.at("T");

    TimeVaryingField f;
    f.period_T = period;
    f.rhs = [=](double t, const Vec2 &z) -> Vec2 {
        const double r = z.norm();
        const double s = r <= 1.0 ? 0.0 : (r >= 2.0 ? 1.0 : smoothstep(r - 1.0));
        Vec2 grad = (omega0 + (omega_inf - omega0) * s) * z;
        if (r > 1.0 && r < 2.0 && eps != 0.0) {
            const double u = r - 1.0;
            const double bump = 16.0 * u * u * (1.0 - u) * (1.0 - u);
            const double dbump = 32.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
            const double xy = z.x() * z.y();
            const double c = eps * std::cos(kTwoPi * t / period);
            grad += c * (dbump * xy / r * z + bump * Vec2(z.y(), z.x()));
        }
        return {grad.y(), -grad.x()};
    };
    f.lin_zero = [omega0](double) { return clockwise_generator(omega0); };
    f.lin_inf = [omega_inf](double) { return clockwise_generator(omega_inf); };
    return f;
}

TimeVaryingField expansive_spiral(const std::map<std::string, double> &p) {
    const double period = p.at("T");
    TimeVaryingField f;
    f.period_T = period;
    f.rhs = [period](double t, const Vec2 &z) -> Vec2 {
        const double r = z.norm();
        return (z + r * Vec2(z.y(), -z.x())) / (1.0 + phase(t, period));
    };
    return f;
}

}  // namespace

double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * (3.0 - 2.0 * u);
}

Vec2 evaluate_field(const TimeVaryingField &field, double t, const Vec2 &z) {
    const double n = z.norm();
    if (!(n <= field.norm_cap)) {
        std::ostringstream os;
        os << "|z| = " << n << " exceeds norm cap " << field.norm_cap << " at t = " << t;
        throw NormCapExceeded(os.str());
    }
    return field.rhs(t, z);
}

ScenarioId parse_scenario_id(const std::string &name) {
    for (const auto &entry : kScenarioNames) {
        if (name == entry.name) return entry.id;
    }
    throw UnknownScenario("unknown scenario '" + name + "'");
}

std::string to_string(ScenarioId id) {
    for (const auto &entry : kScenarioNames) {
        if (entry.id == id) return entry.name;
    }
    return "unknown";
}

std::vector<std::string> scenario_names() {
    std::vector<std::string> out;
    for (const auto &entry : kScenarioNames) out.emplace_back(entry.name);
    return out;
}

std::map<std::string, double> default_params(ScenarioId id) {
    switch (id) {
    case ScenarioId::rigid_rotation:
        return {{"omega", kPi / 4.0}, {"T", 1.0}};
    case ScenarioId::example51:
        return {{"tau", 0.1}, {"T", 0.43}};
    case ScenarioId::linear_system:
        return {{"a11", -1.0}, {"a12", 0.0}, {"a21", 0.0}, {"a22", 1.0}, {"T", 0.43}};
    case ScenarioId::duffing_superlinear:
        return {{"c", 0.0}, {"T", 1.0}};
    case ScenarioId::asymlin_hamiltonian:
        return {{"omega0", 0.5 * kPi}, {"omegainf", 4.5 * kPi}, {"eps", 0.5}, {"T", 1.0}};
    case ScenarioId::expansive_spiral:
        return {{"T", kTwoPi}};
    }
    throw UnknownScenario("unknown scenario id");
}

TimeVaryingField build_scenario(const ScenarioSpec &spec) {
    const auto params = merged_params(spec);
    TimeVaryingField field;
    switch (spec.name) {
    case ScenarioId::rigid_rotation: field = rigid_rotation(params); break;
    case ScenarioId::example51: field = example51(params); break;
    case ScenarioId::linear_system: field = linear_system(params); break;
    case ScenarioId::duffing_superlinear: field = duffing(params); break;
    case ScenarioId::asymlin_hamiltonian: field = asymlin_hamiltonian(params); break;
    case ScenarioId::expansive_spiral: field = expansive_spiral(params); break;
    }
    field.name = to_string(spec.name);
    return field;
}

}  // namespace rotodeg
