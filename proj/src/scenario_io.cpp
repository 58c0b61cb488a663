#include "mgc/scenario_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "mgc/error.hpp"

namespace mgc {
namespace {

enum class Section { None, Model, Dgus, Lines, Comm, Events, Checks };

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const auto start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Scenario run() {
        std::size_t pos = 0;
        while (pos <= text_.size()) {
            auto end = text_.find('\n', pos);
            if (end == std::string_view::npos) end = text_.size();
            ++line_no_;
            auto line = text_.substr(pos, end - pos);
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (!line.empty()) handle(line);
            pos = end + 1;
        }
        if (!seen_keys_.count("horizon")) fail_at(0, "missing required key 'horizon'");
        if (sc_.dgus.empty()) fail_at(0, "no DGUs declared");
        try {
            validate(sc_);
        } catch (const ParseError& e) {
            throw ParseError(std::string("invalid scenario: ") + e.what());
        }
        return std::move(sc_);
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { fail_at(line_no_, msg); }
    [[noreturn]] static void fail_at(std::size_t line, const std::string& msg) {
        throw ParseError(line ? "line " + std::to_string(line) + ": " + msg : msg);
    }

    double number(std::string_view tok) const {
        double x = 0.0;
        const auto* first = tok.data();
        const auto* last = first + tok.size();
        const auto res = std::from_chars(first, last, x);
        if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(x)) {
            fail("expected a number, got '" + std::string(tok) + "'");
        }
        return x;
    }

    DguId id(std::string_view tok) const {
        DguId x = 0;
        const auto* first = tok.data();
        const auto* last = first + tok.size();
        const auto res = std::from_chars(first, last, x);
        if (res.ec != std::errc{} || res.ptr != last) fail("expected an integer id, got '" + std::string(tok) + "'");
        return x;
    }

    bool flag(std::string_view tok) const {
        if (tok == "yes") return true;
        if (tok == "no") return false;
        fail("expected yes or no, got '" + std::string(tok) + "'");
    }

    double positive(std::string_view tok, const char* what) const {
        const double x = number(tok);
        if (!(x > 0.0)) fail(std::string(what) + " must be positive");
        return x;
    }

    void arity(const std::vector<std::string_view>& t, std::size_t n, const char* what) const {
        if (t.size() != n) {
            fail(std::string(what) + " expects " + std::to_string(n) + " fields, got " + std::to_string(t.size()));
        }
    }

    void handle(std::string_view line) {
        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header");
            const auto name = trim(line.substr(1, line.size() - 2));
            static const std::map<std::string_view, Section> sections = {
                {"model", Section::Model}, {"dgus", Section::Dgus},     {"lines", Section::Lines},
                {"comm", Section::Comm},   {"events", Section::Events}, {"checks", Section::Checks}};
            const auto it = sections.find(name);
            if (it == sections.end()) fail("unknown section '" + std::string(name) + "'");
            if (!seen_sections_.insert(it->second).second) fail("duplicate section '" + std::string(name) + "'");
            section_ = it->second;
            return;
        }
        switch (section_) {
            case Section::None: fail("content before the first section header");
            case Section::Model: model(line); break;
            case Section::Dgus: dgu(split(line)); break;
            case Section::Lines: power_line(split(line)); break;
            case Section::Comm: comm(split(line)); break;
            case Section::Events: event(split(line)); break;
            case Section::Checks: check(split(line)); break;
        }
    }

    void model(std::string_view line) {
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail("expected key = value");
        const auto key = std::string(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        if (value.empty()) fail("empty value for '" + key + "'");
        if (!seen_keys_.insert(key).second) fail("duplicate key '" + key + "'");
        auto& s = sc_.settings;
        if (key == "name") {
            sc_.name = std::string(value);
        } else if (key == "mode") {
            if (value == "unit_gain") s.mode = PrimaryMode::UnitGain;
            else if (value == "first_order") s.mode = PrimaryMode::FirstOrder;
            else fail("mode must be unit_gain or first_order");
        } else if (key == "regime") {
            if (value == "d_identity") s.regime = Regime::DIdentity;
            else if (value == "commuting") s.regime = Regime::Commuting;
            else fail("regime must be d_identity or commuting");
        } else if (key == "omega_c") {
            s.omega_c = positive(value, "omega_c");
        } else if (key == "gain") {
            s.gain = positive(value, "gain");
        } else if (key == "mu") {
            s.mu = positive(value, "mu");
        } else if (key == "v_ref") {
            s.v_ref = positive(value, "v_ref");
        } else if (key == "horizon") {
            sc_.horizon = positive(value, "horizon");
        } else if (key == "dt") {
            sc_.dt = positive(value, "dt");
        } else {
            fail("unknown key '" + key + "'");
        }
    }

    void dgu(const std::vector<std::string_view>& t) {
        arity(t, 6, "DGU row");
        DguEntry d;
        d.spec.id = id(t[0]);
        d.spec.scale_current = positive(t[1], "scale current");
        d.spec.v_ref = positive(t[2], "v_ref");
        d.spec.load_current = number(t[3]);
        d.present = flag(t[4]);
        d.secondary = flag(t[5]);
        sc_.dgus.push_back(d);
    }

    void power_line(const std::vector<std::string_view>& t) {
        arity(t, 5, "line row");
        LineEntry l;
        l.line.from = id(t[0]);
        l.line.to = id(t[1]);
        l.line.resistance = positive(t[2], "resistance");
        l.line.inductance = number(t[3]);
        if (l.line.inductance < 0.0) fail("inductance must be non-negative");
        l.closed = flag(t[4]);
        sc_.lines.push_back(l);
    }

    void comm(const std::vector<std::string_view>& t) {
        arity(t, 3, "comm row");
        const CommLink link{id(t[0]), id(t[1]), positive(t[2], "coefficient")};
        if (link.a == link.b) fail("communication self-loop");
        for (const auto& c : sc_.comm) {
            const bool same = (c.a == link.a && c.b == link.b) || (c.a == link.b && c.b == link.a);
            if (!same) continue;
            if (c.weight != link.weight) fail("asymmetric communication coefficients");
            return;
        }
        sc_.comm.push_back(link);
    }

    void event(const std::vector<std::string_view>& t) {
        if (t.size() < 2) fail("event row needs a time and a kind");
        Event e;
        e.time = number(t[0]);
        const auto kind = t[1];
        if (kind == "connect_line") {
            arity(t, 4, "connect_line");
            e.action = ConnectLine{id(t[2]), id(t[3])};
        } else if (kind == "enable_secondary") {
            EnableSecondary a;
            for (std::size_t i = 2; i < t.size(); ++i) a.dgus.push_back(id(t[i]));
            if (a.dgus.empty()) fail("enable_secondary needs at least one DGU");
            e.action = std::move(a);
        } else if (kind == "plug_in") {
            if (t.size() < 5 || t[3] != "via") fail("expected: plug_in <id> via <ids...> [comm <id:coef...>]");
            PlugIn a;
            a.dgu = id(t[2]);
            std::size_t i = 4;
            for (; i < t.size() && t[i] != "comm"; ++i) a.via.push_back(id(t[i]));
            if (a.via.empty()) fail("plug_in needs at least one line");
            if (i < t.size()) {
                if (++i == t.size()) fail("comm needs at least one neighbour");
                for (; i < t.size(); ++i) {
                    const auto colon = t[i].find(':');
                    if (colon == std::string_view::npos) fail("comm entries are <id>:<coefficient>");
                    a.comm.push_back(
                        {a.dgu, id(t[i].substr(0, colon)), positive(t[i].substr(colon + 1), "coefficient")});
                }
            }
            e.action = std::move(a);
        } else if (kind == "unplug") {
            arity(t, 3, "unplug");
            e.action = Unplug{id(t[2])};
        } else if (kind == "load_step") {
            arity(t, 4, "load_step");
            e.action = LoadStep{id(t[2]), number(t[3])};
        } else {
            fail("unknown event '" + std::string(kind) + "'");
        }
        sc_.events.push_back(std::move(e));
    }

    void check(const std::vector<std::string_view>& t) {
        if (t.size() < 5) fail("check row: <from> <to> <metric> [args] <op> <threshold>");
        Check c;
        c.from = number(t[0]);
        c.to = number(t[1]);
        std::size_t i = 3;
        if (t[2] == "cs_error") {
            c.metric.kind = MetricKind::CurrentSharing;
        } else if (t[2] == "vb_error") {
            c.metric.kind = MetricKind::VoltageBalancing;
        } else if (t[2] == "ratio") {
            arity(t, 8, "ratio check");
            c.metric = {MetricKind::CurrentRatio, id(t[3]), id(t[4]), positive(t[5], "ratio factor")};
            i = 6;
        } else {
            fail("unknown metric '" + std::string(t[2]) + "'");
        }
        arity(t, i + 2, "check");
        if (t[i] == "<=") c.comparison = Comparison::AtMost;
        else if (t[i] == ">") c.comparison = Comparison::Above;
        else fail("comparison must be <= or >");
        c.threshold = number(t[i + 1]);
        sc_.checks.push_back(c);
    }

    std::string_view text_;
    std::size_t line_no_ = 0;
    Section section_ = Section::None;
    std::set<Section> seen_sections_;
    std::set<std::string> seen_keys_;
    Scenario sc_{};
};

std::string num(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

Scenario parse_scenario(std::string_view text) {
    return Parser(text).run();
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& sc) {
    if (sc.name.find_first_of("#\n") != std::string::npos || trim(sc.name) != sc.name || sc.name.empty()) {
        throw ParseError("scenario name cannot be serialized");
    }
    const auto& s = sc.settings;
    std::ostringstream out;
    out << "[model]\n"
        << "name = " << sc.name << '\n'
        << "mode = " << (s.mode == PrimaryMode::UnitGain ? "unit_gain" : "first_order") << '\n'
        << "omega_c = " << num(s.omega_c) << '\n'
        << "gain = " << num(s.gain) << '\n'
        << "regime = " << (s.regime == Regime::DIdentity ? "d_identity" : "commuting") << '\n'
        << "mu = " << num(s.mu) << '\n'
        << "v_ref = " << num(s.v_ref) << '\n'
        << "horizon = " << num(sc.horizon) << '\n';
    if (sc.dt) out << "dt = " << num(*sc.dt) << '\n';

    out << "\n[dgus]\n# id scale v_ref load present secondary\n";
    for (const auto& d : sc.dgus) {
        out << d.spec.id << ' ' << num(d.spec.scale_current) << ' ' << num(d.spec.v_ref) << ' '
            << num(d.spec.load_current) << ' ' << yes_no(d.present) << ' ' << yes_no(d.secondary) << '\n';
    }
    out << "\n[lines]\n# from to R L closed\n";
    for (const auto& l : sc.lines) {
        out << l.line.from << ' ' << l.line.to << ' ' << num(l.line.resistance) << ' ' << num(l.line.inductance)
            << ' ' << yes_no(l.closed) << '\n';
    }
    if (!sc.comm.empty()) {
        out << "\n[comm]\n";
        for (const auto& c : sc.comm) out << c.a << ' ' << c.b << ' ' << num(c.weight) << '\n';
    }
    if (!sc.events.empty()) {
        out << "\n[events]\n";
        for (const auto& e : sc.events) {
            out << num(e.time) << ' ';
            std::visit(
                [&](const auto& a) {
                    using T = std::decay_t<decltype(a)>;
                    if constexpr (std::is_same_v<T, ConnectLine>) {
                        out << "connect_line " << a.a << ' ' << a.b;
                    } else if constexpr (std::is_same_v<T, EnableSecondary>) {
                        out << "enable_secondary";
                        for (DguId d : a.dgus) out << ' ' << d;
                    } else if constexpr (std::is_same_v<T, PlugIn>) {
                        out << "plug_in " << a.dgu << " via";
                        for (DguId d : a.via) out << ' ' << d;
                        if (!a.comm.empty()) {
                            out << " comm";
                            for (const auto& c : a.comm) out << ' ' << (c.a == a.dgu ? c.b : c.a) << ':' << num(c.weight);
                        }
                    } else if constexpr (std::is_same_v<T, Unplug>) {
                        out << "unplug " << a.dgu;
                    } else {
                        out << "load_step " << a.dgu << ' ' << num(a.load_current);
                    }
                },
                e.action);
            out << '\n';
        }
    }
    if (!sc.checks.empty()) {
        out << "\n[checks]\n";
        for (const auto& c : sc.checks) {
            out << num(c.from) << ' ' << num(c.to) << ' ';
            switch (c.metric.kind) {
                case MetricKind::CurrentSharing: out << "cs_error"; break;
                case MetricKind::VoltageBalancing: out << "vb_error"; break;
                case MetricKind::CurrentRatio:
                    out << "ratio " << c.metric.a << ' ' << c.metric.b << ' ' << num(c.metric.factor);
                    break;
            }
            out << (c.comparison == Comparison::AtMost ? " <= " : " > ") << num(c.threshold) << '\n';
        }
    }
    return out.str();
}

}  // namespace mgc
