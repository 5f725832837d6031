#include "runner.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "errors.hpp"
#include "riesz.hpp"

namespace axisw {

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Simulate: return "simulate";
        case Mode::Sweep: return "sweep";
        case Mode::Threshold: return "threshold";
        case Mode::RieszSurvey: return "riesz-survey";
    }
    return "?";
}

Mode parse_mode(const std::string& name) {
    if (name == "simulate") return Mode::Simulate;
    if (name == "sweep") return Mode::Sweep;
    if (name == "threshold") return Mode::Threshold;
    if (name == "riesz-survey") return Mode::RieszSurvey;
    throw ConfigError("unknown mode '" + name + "' (expected simulate, sweep, threshold or riesz-survey)");
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    if (std::isfinite(v) && s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

struct ParseContext {
    std::string source;
    std::filesystem::path base_dir;

    std::string where(const YAML::Node& n) const {
        const YAML::Mark m = n.Mark();
        if (m.line < 0) return source;
        return source + ":" + std::to_string(m.line + 1);
    }

    [[noreturn]] void fail(const YAML::Node& n, const std::string& field, const std::string& what) const {
        throw ConfigError(where(n) + ": field '" + field + "': " + what);
    }

    void expect_map(const YAML::Node& n, const std::string& field, std::initializer_list<const char*> allowed) const {
        if (!n.IsMap()) fail(n, field, "expected a block of key: value pairs");
        for (const auto& kv : n) {
            const std::string key = kv.first.Scalar();
            const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
            if (!known) fail(kv.first, field.empty() ? key : field + "." + key, "unknown field");
        }
    }

    double number(const YAML::Node& n, const std::string& field) const {
        if (!n.IsScalar()) fail(n, field, "expected a number");
        try {
            const double v = n.as<double>();
            if (!std::isfinite(v)) fail(n, field, "expected a finite number");
            return v;
        } catch (const YAML::Exception&) {
            fail(n, field, "expected a number, got '" + n.Scalar() + "'");
        }
    }

    long long integer(const YAML::Node& n, const std::string& field) const {
        if (!n.IsScalar()) fail(n, field, "expected an integer");
        try {
            return n.as<long long>();
        } catch (const YAML::Exception&) {
            fail(n, field, "expected an integer, got '" + n.Scalar() + "'");
        }
    }

    int small_int(const YAML::Node& n, const std::string& field) const {
        const long long v = integer(n, field);
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
            fail(n, field, "integer out of range");
        return static_cast<int>(v);
    }

    std::string text(const YAML::Node& n, const std::string& field) const {
        if (!n.IsScalar()) fail(n, field, "expected a string");
        return n.Scalar();
    }

    bool boolean(const YAML::Node& n, const std::string& field) const {
        if (!n.IsScalar()) fail(n, field, "expected true or false");
        try {
            return n.as<bool>();
        } catch (const YAML::Exception&) {
            fail(n, field, "expected true or false, got '" + n.Scalar() + "'");
        }
    }

    std::vector<double> numbers(const YAML::Node& n, const std::string& field) const {
        if (!n.IsSequence()) fail(n, field, "expected a list of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < n.size(); ++i) out.push_back(number(n[i], field + "[" + std::to_string(i) + "]"));
        return out;
    }
};

Profile parse_profile(const ParseContext& ctx, const YAML::Node& n, const std::string& field) {
    ctx.expect_map(n, field, {"profile", "amplitude", "width", "mode", "file"});
    const YAML::Node kind_node = n["profile"];
    if (!kind_node) ctx.fail(n, field + ".profile", "missing (gaussian_sine, zero or table)");
    const std::string kind = ctx.text(kind_node, field + ".profile");

    if (kind == "zero") return Profile::zero();
    if (kind == "gaussian_sine") {
        double amplitude = 1.0;
        double width = 1.0;
        int mode = 1;
        if (auto v = n["amplitude"]) amplitude = ctx.number(v, field + ".amplitude");
        if (auto v = n["width"]) width = ctx.number(v, field + ".width");
        if (auto v = n["mode"]) mode = ctx.small_int(v, field + ".mode");
        if (!(width > 0.0)) ctx.fail(n["width"], field + ".width", "must be positive");
        if (mode < 1) ctx.fail(n["mode"], field + ".mode", "must be at least 1");
        return Profile::gaussian_sine(amplitude, width, mode);
    }
    if (kind == "table") {
        const YAML::Node file = n["file"];
        if (!file) ctx.fail(n, field + ".file", "missing path for a table profile");
        std::filesystem::path path = ctx.text(file, field + ".file");
        if (path.is_relative() && !ctx.base_dir.empty()) path = ctx.base_dir / path;
        return Profile::from_csv(path.string());
    }
    ctx.fail(kind_node, field + ".profile", "unknown profile '" + kind + "'");
}

void parse_grid(const ParseContext& ctx, const YAML::Node& n, GridSpec& g) {
    ctx.expect_map(n, "grid", {"R", "Nr", "Nz"});
    for (const char* key : {"R", "Nr", "Nz"})
        if (!n[key]) ctx.fail(n, std::string("grid.") + key, "missing");
    g.R = ctx.number(n["R"], "grid.R");
    g.Nr = ctx.small_int(n["Nr"], "grid.Nr");
    g.Nz = ctx.small_int(n["Nz"], "grid.Nz");
}

void parse_init(const ParseContext& ctx, const YAML::Node& n, InitConfig& init) {
    ctx.expect_map(n, "init", {"family", "epsilon", "delta", "p", "q", "U1", "W1"});
    if (auto v = n["family"]) {
        try {
            init.family = parse_family(ctx.text(v, "init.family"));
        } catch (const ConfigError& e) {
            ctx.fail(v, "init.family", e.what());
        }
    }
    if (auto v = n["epsilon"]) init.epsilon = ctx.number(v, "init.epsilon");
    if (auto v = n["delta"]) init.delta = ctx.number(v, "init.delta");
    if (auto v = n["p"]) init.p = ctx.number(v, "init.p");
    if (auto v = n["q"]) init.q = ctx.number(v, "init.q");
    if (auto v = n["U1"]) init.U1 = parse_profile(ctx, v, "init.U1");
    if (auto v = n["W1"]) init.W1 = parse_profile(ctx, v, "init.W1");
}

void parse_stepping(const ParseContext& ctx, const YAML::Node& n, SteppingSpec& s) {
    ctx.expect_map(n, "stepping", {"dt", "dt_max", "cfl_safety", "t_end", "sample_interval", "checkpoint_every"});
    if (auto v = n["dt"]) {
        if (v.IsScalar() && v.Scalar() == "auto") {
            s.auto_dt = true;
        } else {
            s.auto_dt = false;
            s.dt = ctx.number(v, "stepping.dt");
        }
    }
    if (auto v = n["dt_max"]) s.dt_max = ctx.number(v, "stepping.dt_max");
    if (auto v = n["cfl_safety"]) s.cfl_safety = ctx.number(v, "stepping.cfl_safety");
    if (!n["t_end"]) ctx.fail(n, "stepping.t_end", "missing");
    s.t_end = ctx.number(n["t_end"], "stepping.t_end");
    if (!n["sample_interval"]) ctx.fail(n, "stepping.sample_interval", "missing");
    s.sample_interval = ctx.number(n["sample_interval"], "stepping.sample_interval");
    if (auto v = n["checkpoint_every"]) s.checkpoint_every = ctx.small_int(v, "stepping.checkpoint_every");
}

void parse_diagnostics(const ParseContext& ctx, const YAML::Node& n, DiagnosticsSpec& d) {
    ctx.expect_map(n, "diagnostics", {"C_p", "C_q", "C_q_scan", "monotone_slack"});
    if (auto v = n["C_p"]) d.constants.Cp = ctx.number(v, "diagnostics.C_p");
    if (auto v = n["C_q"]) d.constants.Cq = ctx.number(v, "diagnostics.C_q");
    if (auto v = n["C_q_scan"]) d.cq_scan = ctx.numbers(v, "diagnostics.C_q_scan");
    if (auto v = n["monotone_slack"]) d.monotone_slack = ctx.number(v, "diagnostics.monotone_slack");
}

void parse_output(const ParseContext& ctx, const YAML::Node& n, ExperimentConfig& cfg) {
    ctx.expect_map(n, "output", {"directory", "formats"});
    if (auto v = n["directory"]) cfg.output_dir = ctx.text(v, "output.directory");
    if (auto v = n["formats"]) {
        if (!v.IsSequence()) ctx.fail(v, "output.formats", "expected a list");
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string f = ctx.text(v[i], "output.formats");
            if (f != "csv") ctx.fail(v[i], "output.formats", "unsupported format '" + f + "' (only csv)");
        }
    }
}

void parse_sweep(const ParseContext& ctx, const YAML::Node& n, SweepSpec& s) {
    ctx.expect_map(n, "sweep", {"epsilons", "radius_over_epsilon", "workers"});
    if (!n["epsilons"]) ctx.fail(n, "sweep.epsilons", "missing");
    s.epsilons = ctx.numbers(n["epsilons"], "sweep.epsilons");
    if (auto v = n["radius_over_epsilon"]) s.radius_over_epsilon = ctx.number(v, "sweep.radius_over_epsilon");
    if (auto v = n["workers"]) {
        const long long w = ctx.integer(v, "sweep.workers");
        if (w < 0) ctx.fail(v, "sweep.workers", "must be non-negative");
        s.workers = static_cast<unsigned>(w);
    }
}

void parse_survey_grid(const ParseContext& ctx, const YAML::Node& n, const std::string& field, int& Nr, int& Nz) {
    ctx.expect_map(n, field, {"Nr", "Nz"});
    if (auto v = n["Nr"]) Nr = ctx.small_int(v, field + ".Nr");
    if (auto v = n["Nz"]) Nz = ctx.small_int(v, field + ".Nz");
}

void parse_survey(const ParseContext& ctx, const YAML::Node& n, SurveySpec& s) {
    ctx.expect_map(n, "survey", {"samples", "seed", "R", "coarse", "fine", "p"});
    if (auto v = n["samples"]) {
        const long long count = ctx.integer(v, "survey.samples");
        if (count < 1) ctx.fail(v, "survey.samples", "must be at least 1");
        s.samples = static_cast<std::size_t>(count);
    }
    if (auto v = n["seed"]) {
        const long long seed = ctx.integer(v, "survey.seed");
        if (seed < 0) ctx.fail(v, "survey.seed", "must be non-negative");
        s.seed = static_cast<std::uint64_t>(seed);
    }
    if (auto v = n["R"]) s.R = ctx.number(v, "survey.R");
    if (auto v = n["coarse"]) parse_survey_grid(ctx, v, "survey.coarse", s.coarse_Nr, s.coarse_Nz);
    if (auto v = n["fine"]) parse_survey_grid(ctx, v, "survey.fine", s.fine_Nr, s.fine_Nz);
    if (auto v = n["p"]) s.p = ctx.number(v, "survey.p");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              const std::filesystem::path& base_dir) {
    const ParseContext ctx{source, base_dir};
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }

    ExperimentConfig cfg;
    if (root.IsNull()) throw ConfigError(source + ": empty configuration");
    ctx.expect_map(root, "",
                   {"mode", "grid", "init", "stepping", "diagnostics", "output", "sweep", "survey", "deterministic"});

    if (auto v = root["mode"]) {
        try {
            cfg.mode = parse_mode(ctx.text(v, "mode"));
        } catch (const ConfigError& e) {
            if (std::string(e.what()).rfind(source, 0) == 0) throw;
            ctx.fail(v, "mode", e.what());
        }
    }
    if (auto v = root["grid"]) {
        parse_grid(ctx, v, cfg.grid);
        cfg.has_grid = true;
    }
    if (auto v = root["init"]) {
        parse_init(ctx, v, cfg.init);
        cfg.has_init = true;
    }
    if (auto v = root["stepping"]) {
        parse_stepping(ctx, v, cfg.stepping);
        cfg.has_stepping = true;
    }
    if (auto v = root["diagnostics"]) parse_diagnostics(ctx, v, cfg.diagnostics);
    if (auto v = root["output"]) parse_output(ctx, v, cfg);
    if (auto v = root["sweep"]) {
        parse_sweep(ctx, v, cfg.sweep);
        cfg.has_sweep = true;
    }
    if (auto v = root["survey"]) {
        parse_survey(ctx, v, cfg.survey);
        cfg.has_survey = true;
    }
    if (auto v = root["deterministic"]) cfg.deterministic = ctx.boolean(v, "deterministic");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string(), path.parent_path());
}

void validate_config(const ExperimentConfig& cfg) {
    const std::string mode = mode_name(cfg.mode);
    auto require = [&](bool present, const char* block) {
        if (!present) throw ConfigError(std::string("mode ") + mode + " requires a '" + block + "' block");
    };
    const bool needs_run = cfg.mode == Mode::Simulate || cfg.mode == Mode::Sweep;
    if (needs_run || cfg.mode == Mode::Threshold) {
        require(cfg.has_grid, "grid");
        require(cfg.has_init, "init");
        make_grid(cfg.grid.R, cfg.grid.Nr, cfg.grid.Nz);
        const ValidationReport report = check_parameters(cfg.init);
        if (!report.ok()) throw ConfigError("init: " + report.violations.front());
    }
    validate(cfg.diagnostics.constants);
    if (needs_run) {
        require(cfg.has_stepping, "stepping");
        const SteppingSpec& s = cfg.stepping;
        if (!(s.t_end > 0.0)) throw ConfigError("stepping.t_end must be positive");
        if (!(s.sample_interval > 0.0) || s.sample_interval > 0.5 * s.t_end)
            throw ConfigError("stepping.sample_interval must split the run into at least 2 samples");
        if (!s.auto_dt && !(s.dt > 0.0)) throw ConfigError("stepping.dt must be positive or 'auto'");
        if (!(s.dt_max > 0.0)) throw ConfigError("stepping.dt_max must be positive");
        if (!(s.cfl_safety > 0.0 && s.cfl_safety <= 1.0))
            throw ConfigError("stepping.cfl_safety must lie in (0, 1]");
        if (s.checkpoint_every < 1) throw ConfigError("stepping.checkpoint_every must be at least 1");
        if (cfg.diagnostics.cq_scan.empty()) throw ConfigError("diagnostics.C_q_scan must not be empty");
        for (double cq : cfg.diagnostics.cq_scan)
            if (!(cq > 0.0)) throw ConfigError("diagnostics.C_q_scan entries must be positive");
        if (!(cfg.diagnostics.monotone_slack >= 0.0))
            throw ConfigError("diagnostics.monotone_slack must be non-negative");
    }
    if (cfg.mode == Mode::Sweep) {
        require(cfg.has_sweep, "sweep");
        if (cfg.sweep.epsilons.empty()) throw ConfigError("sweep.epsilons must not be empty");
        for (double e : cfg.sweep.epsilons)
            if (!(e > 0.0 && e <= 1.0)) throw ConfigError("sweep.epsilons entries must lie in (0, 1]");
        if (cfg.sweep.radius_over_epsilon && !(*cfg.sweep.radius_over_epsilon > 0.0))
            throw ConfigError("sweep.radius_over_epsilon must be positive");
    }
    if (cfg.mode == Mode::RieszSurvey) {
        require(cfg.has_survey, "survey");
        const SurveySpec& s = cfg.survey;
        make_grid(s.R, s.coarse_Nr, s.coarse_Nz);
        make_grid(s.R, s.fine_Nr, s.fine_Nz);
        if (!(s.p > 1.0)) throw ConfigError("survey.p must exceed 1");
        if (s.samples < 1) throw ConfigError("survey.samples must be at least 1");
    }
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void put_f64(std::string& buf, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xFFu));
}

class ByteReader {
public:
    ByteReader(const std::string& data, std::string path) : data_(data), path_(std::move(path)) {}

    std::uint64_t raw(int bytes) {
        if (pos_ + static_cast<std::size_t>(bytes) > data_.size())
            throw IncompatibleError("checkpoint " + path_ + " is truncated");
        std::uint64_t v = 0;
        for (int i = 0; i < bytes; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += static_cast<std::size_t>(bytes);
        return v;
    }
    std::uint32_t u32() { return static_cast<std::uint32_t>(raw(4)); }
    double f64() { return std::bit_cast<double>(raw(8)); }
    std::size_t remaining() const { return data_.size() - pos_; }
    void skip(std::size_t n) { pos_ += n; }

private:
    const std::string& data_;
    std::string path_;
    std::size_t pos_ = 0;
};

}  // namespace

Checkpoint make_checkpoint(const State& s, const InitConfig& init) {
    const Grid& g = s.grid();
    Checkpoint c;
    c.R = g.R();
    c.Nr = g.Nr();
    c.Nz = g.Nz();
    c.t = s.t;
    c.epsilon = init.epsilon;
    c.delta = init.delta;
    c.p = init.p;
    c.q = init.q;
    c.u1.assign(s.u1.values().begin(), s.u1.values().end());
    c.w1.assign(s.w1.values().begin(), s.w1.values().end());
    return c;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
    const std::size_t n = static_cast<std::size_t>(c.Nr) * static_cast<std::size_t>(c.Nz);
    if (c.u1.size() != n || c.w1.size() != n) throw DataError("checkpoint arrays do not match the grid size");

    std::string buf(kCheckpointMagic, sizeof kCheckpointMagic);
    buf.reserve(buf.size() + 64 + 16 * n);
    put_u32(buf, kCheckpointVersion);
    put_f64(buf, c.R);
    put_u32(buf, static_cast<std::uint32_t>(c.Nr));
    put_u32(buf, static_cast<std::uint32_t>(c.Nz));
    for (double v : {c.t, c.epsilon, c.delta, c.p, c.q}) put_f64(buf, v);
    for (double v : c.u1) put_f64(buf, v);
    for (double v : c.w1) put_f64(buf, v);

    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write checkpoint " + tmp.string());
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        out.flush();
        if (!out) throw IoError("failed writing checkpoint " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move checkpoint into place at " + path.string() + ": " + ec.message());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string data = ss.str();
    const std::string name = path.string();

    if (data.size() < sizeof kCheckpointMagic ||
        !std::equal(std::begin(kCheckpointMagic), std::end(kCheckpointMagic), data.begin()))
        throw IncompatibleError("checkpoint " + name + " has a bad magic string");

    ByteReader r(data, name);
    r.skip(sizeof kCheckpointMagic);
    const std::uint32_t version = r.u32();
    if (version != kCheckpointVersion)
        throw IncompatibleError("checkpoint " + name + " has unsupported version " + std::to_string(version));

    Checkpoint c;
    c.R = r.f64();
    const std::uint32_t Nr = r.u32();
    const std::uint32_t Nz = r.u32();
    if (Nr == 0 || Nz == 0 || Nr > (1u << 24) || Nz > (1u << 24))
        throw IncompatibleError("checkpoint " + name + " has an invalid grid size");
    c.Nr = static_cast<int>(Nr);
    c.Nz = static_cast<int>(Nz);
    c.t = r.f64();
    c.epsilon = r.f64();
    c.delta = r.f64();
    c.p = r.f64();
    c.q = r.f64();

    const std::size_t n = static_cast<std::size_t>(Nr) * Nz;
    if (r.remaining() != 16 * n)
        throw IncompatibleError("checkpoint " + name + " payload size does not match its " + std::to_string(Nr) + "x" +
                                std::to_string(Nz) + " grid");
    c.u1.resize(n);
    c.w1.resize(n);
    for (double& v : c.u1) v = r.f64();
    for (double& v : c.w1) v = r.f64();
    return c;
}

State restore_state(const Checkpoint& c, const PoissonWorkspace& ws) {
    const Grid& g = ws.grid();
    if (g.R() != c.R || g.Nr() != c.Nr || g.Nz() != c.Nz)
        throw IncompatibleError("checkpoint grid does not match the workspace grid");
    return make_state(c.t, ScalarField(g, c.u1), ScalarField(g, c.w1), ws);
}

void check_compatible(const Checkpoint& c, const ExperimentConfig& cfg) {
    std::vector<std::string> diffs;
    auto cmp = [&](const char* what, double a, double b) {
        if (a != b) diffs.push_back(std::string(what) + " " + format_number(a) + " vs " + format_number(b));
    };
    cmp("R", c.R, cfg.grid.R);
    cmp("Nr", c.Nr, cfg.grid.Nr);
    cmp("Nz", c.Nz, cfg.grid.Nz);
    cmp("epsilon", c.epsilon, cfg.init.epsilon);
    cmp("delta", c.delta, cfg.init.delta);
    cmp("p", c.p, cfg.init.p);
    cmp("q", c.q, cfg.init.q);
    if (!diffs.empty()) {
        std::string msg = "checkpoint does not match the configuration:";
        for (const auto& d : diffs) msg += " " + d + ";";
        throw IncompatibleError(msg);
    }
}

// ---------------------------------------------------------------------------
// Time series

void write_csv_row(std::ostream& out, const NormReport& r) {
    const double cols[] = {r.t,         r.norm_u1_2p, r.norm_w1_2q,       r.f_L2,         r.g_L2,
                           r.lyapunov,  r.cond1_margin, r.grad_f_L2,      r.grad_g_L2,    r.div_residual_max,
                           r.parity_error, r.kinetic_energy, r.dt_used};
    char buf[40];
    for (std::size_t i = 0; i < std::size(cols); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", cols[i]);
        if (i) out << ',';
        out << buf;
    }
    out << '\n';
}

std::vector<NormReport> read_timeseries(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kTimeseriesHeader)
        throw DataError(path.string() + ": missing or unexpected header");
    std::vector<NormReport> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> v;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                v.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
        }
        if (v.size() != 13) throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected 13 columns");
        rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11], v[12]});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Drivers

namespace {

// Sample k lands on k * interval, or on t_end for the last one.
double sample_time(long long k, const SteppingSpec& s) {
    const double t = static_cast<double>(k) * s.sample_interval;
    if (t >= s.t_end || s.t_end - t <= 1e-9 * s.sample_interval) return s.t_end;
    return t;
}

}  // namespace

SimulationResult run_simulation(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                const std::optional<Checkpoint>& resume_ckpt, std::ostream& log) {
    const Grid grid = make_grid(cfg.grid.R, cfg.grid.Nr, cfg.grid.Nz);
    const PoissonWorkspace ws(grid);
    const SteppingSpec& stepping = cfg.stepping;
    const AnalysisConstants& consts = cfg.diagnostics.constants;
    const double p = cfg.init.p;
    const double q = cfg.init.q;

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path csv_path = out_dir / "timeseries.csv";
    const std::filesystem::path ckpt_path = out_dir / "checkpoint.bin";

    SimulationResult result;
    State state = [&] {
        if (resume_ckpt) {
            check_compatible(*resume_ckpt, cfg);
            return restore_state(*resume_ckpt, ws);
        }
        std::vector<std::string> warnings;
        State s = build_initial(cfg.init, grid, ws, &warnings);
        for (const auto& w : warnings) log << "warning: " << w << '\n';
        return s;
    }();

    const bool append = resume_ckpt && std::filesystem::exists(csv_path);
    std::ofstream csv(csv_path, append ? std::ios::app : std::ios::trunc);
    if (!csv) throw IoError("cannot write " + csv_path.string());
    if (!append) {
        csv << kTimeseriesHeader << '\n';
        const NormReport first = compute_report(state, consts, p, q, 0.0);
        write_csv_row(csv, first);
        result.samples.push_back(first);
        csv.flush();
    }
    if (!resume_ckpt) write_checkpoint(ckpt_path, make_checkpoint(state, cfg.init));

    StepConfig step_cfg;
    step_cfg.cfl_safety = stepping.cfl_safety;
    long long k = std::llround(state.t / stepping.sample_interval);
    double last_dt = 0.0;
    int since_checkpoint = 0;

    try {
        while (state.t < stepping.t_end) {
            const double target = sample_time(++k, stepping);
            if (target <= state.t) continue;
            while (state.t < target) {
                double dt = stepping.auto_dt ? std::min(stepping.dt_max, stepping.cfl_safety * cfl_dt(state))
                                             : stepping.dt;
                const bool lands = dt >= target - state.t;
                if (lands) dt = target - state.t;
                step_cfg.dt = dt;
                state = step(state, step_cfg, ws);
                if (lands) state.t = target;
                last_dt = dt;
            }
            const NormReport row = compute_report(state, consts, p, q, last_dt);
            write_csv_row(csv, row);
            csv.flush();
            result.samples.push_back(row);
            if (++since_checkpoint >= stepping.checkpoint_every || state.t >= stepping.t_end) {
                write_checkpoint(ckpt_path, make_checkpoint(state, cfg.init));
                since_checkpoint = 0;
            }
        }
    } catch (const BlowUp& e) {
        result.status = ExitStatus::BlowUp;
        result.message = std::string(e.what()) + "; last checkpoint kept at " + ckpt_path.string();
    } catch (const CflViolation& e) {
        result.status = ExitStatus::CflViolation;
        result.message = e.what();
    }
    if (!csv) throw IoError("failed writing " + csv_path.string());
    return result;
}

namespace {

std::string eps_dir_name(std::size_t index, double eps) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "eps_%02zu_%.6g", index, eps);
    return buf;
}

struct SweepRow {
    double epsilon = 0.0;
    double R = 0.0;
    double threshold = 0.0;
    ExitStatus status = ExitStatus::Ok;
    double max_u = 0.0;
    double max_w = 0.0;
    bool monotone = false;
    std::optional<double> monotone_cq;
    std::string log;
};

SweepRow sweep_one(const ExperimentConfig& base, std::size_t index, const std::filesystem::path& out_dir) {
    SweepRow row;
    ExperimentConfig cfg = base;
    cfg.mode = Mode::Simulate;
    cfg.init.epsilon = base.sweep.epsilons[index];
    if (base.sweep.radius_over_epsilon) cfg.grid.R = *base.sweep.radius_over_epsilon / cfg.init.epsilon;
    row.epsilon = cfg.init.epsilon;
    row.R = cfg.grid.R;

    std::ostringstream log;
    try {
        validate_config(cfg);
        const Grid grid = make_grid(cfg.grid.R, cfg.grid.Nr, cfg.grid.Nz);
        row.threshold = epsilon_threshold(cfg.init, cfg.diagnostics.constants, profile_grid(cfg.init, grid));
        const SimulationResult sim = run_simulation(cfg, out_dir / eps_dir_name(index, row.epsilon), std::nullopt, log);
        row.status = sim.status;
        if (!sim.message.empty()) log << "error: " << sim.message << '\n';
        std::vector<double> energy;
        for (const auto& r : sim.samples) {
            row.max_u = std::max(row.max_u, r.norm_u1_2p);
            row.max_w = std::max(row.max_w, r.norm_w1_2q);
            energy.push_back(r.lyapunov);
        }
        row.monotone = non_increasing(energy, cfg.diagnostics.monotone_slack);
        row.monotone_cq = find_monotone_cq(sim.samples, cfg.init.p, cfg.init.q, cfg.diagnostics.constants.Cp,
                                           cfg.diagnostics.cq_scan, cfg.diagnostics.monotone_slack);
    } catch (const ConfigError& e) {
        row.status = ExitStatus::ConfigError;
        log << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        row.status = ExitStatus::DataError;
        log << "error: " << e.what() << '\n';
    }
    row.log = log.str();
    return row;
}

ExitStatus run_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out,
                     std::ostream& log) {
    std::filesystem::create_directories(out_dir);
    const std::size_t n = cfg.sweep.epsilons.size();
    std::vector<SweepRow> rows(n);

    unsigned workers = cfg.deterministic ? 1u : cfg.sweep.workers;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) rows[i] = sweep_one(cfg, i, out_dir);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += workers) rows[i] = sweep_one(cfg, i, out_dir);
            });
    }

    const std::filesystem::path summary = out_dir / "sweep.csv";
    std::ofstream csv(summary, std::ios::trunc);
    if (!csv) throw IoError("cannot write " + summary.string());
    csv << "epsilon,R,epsilon_threshold,threshold_satisfied,status,max_norm_u1_2p,max_norm_w1_2q,lyapunov_monotone,"
           "monotone_cq\n";
    ExitStatus worst = ExitStatus::Ok;
    for (const SweepRow& r : rows) {
        log << r.log;
        csv << format_number(r.epsilon) << ',' << format_number(r.R) << ',' << format_number(r.threshold) << ','
            << (r.epsilon <= r.threshold ? 1 : 0) << ',' << static_cast<int>(r.status) << ','
            << format_number(r.max_u) << ',' << format_number(r.max_w) << ',' << (r.monotone ? 1 : 0) << ','
            << (r.monotone_cq ? format_number(*r.monotone_cq) : std::string("nan")) << '\n';
        if (r.status != ExitStatus::Ok && worst == ExitStatus::Ok) worst = r.status;
    }
    if (!csv) throw IoError("failed writing " + summary.string());
    out << "sweep: " << n << " runs, summary in " << summary.string() << '\n';
    return worst;
}

ExitStatus run_survey(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out) {
    const SurveySpec& s = cfg.survey;
    const Grid coarse = make_grid(s.R, s.coarse_Nr, s.coarse_Nz);
    const Grid fine = make_grid(s.R, s.fine_Nr, s.fine_Nz);
    const unsigned threads = cfg.deterministic ? 1u : 0u;
    const SurveyReport report = czw_survey(s.samples, s.seed, coarse, fine, s.p, threads);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path path = out_dir / "survey.csv";
    std::ofstream csv(path, std::ios::trunc);
    if (!csv) throw IoError("cannot write " + path.string());
    write_survey_csv(report, csv);
    if (!csv) throw IoError("failed writing " + path.string());
    out << "riesz-survey: max ratio " << format_number(report.max_coarse) << " (coarse), "
        << format_number(report.max_fine) << " (fine); details in " << path.string() << '\n';
    return ExitStatus::Ok;
}

template <class Fn>
ExitStatus guarded(std::ostream& log, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return ExitStatus::ConfigError;
    } catch (const IncompatibleError& e) {
        log << "incompatible: " << e.what() << '\n';
        return ExitStatus::Incompatible;
    } catch (const DataError& e) {
        log << "data error: " << e.what() << '\n';
        return ExitStatus::DataError;
    } catch (const UndefinedError& e) {
        log << "undefined: " << e.what() << '\n';
        return ExitStatus::DataError;
    } catch (const BlowUp& e) {
        log << "blow-up: " << e.what() << '\n';
        return ExitStatus::BlowUp;
    } catch (const CflViolation& e) {
        log << "cfl: " << e.what() << '\n';
        return ExitStatus::CflViolation;
    } catch (const IoError& e) {
        log << "io error: " << e.what() << '\n';
        return ExitStatus::IoError;
    } catch (const std::filesystem::filesystem_error& e) {
        log << "io error: " << e.what() << '\n';
        return ExitStatus::IoError;
    } catch (const std::exception& e) {
        log << "internal error: " << e.what() << '\n';
        return ExitStatus::Internal;
    }
}

ExitStatus dispatch(const ExperimentConfig& cfg, const std::optional<Checkpoint>& ckpt,
                    const std::filesystem::path& out_dir, std::ostream& out, std::ostream& log) {
    switch (cfg.mode) {
        case Mode::Simulate: {
            const SimulationResult sim = run_simulation(cfg, out_dir, ckpt, log);
            if (sim.status != ExitStatus::Ok) {
                log << "error: " << sim.message << '\n';
                return sim.status;
            }
            out << "simulate: " << sim.samples.size() << " samples written to "
                << (out_dir / "timeseries.csv").string() << '\n';
            return ExitStatus::Ok;
        }
        case Mode::Sweep: return run_sweep(cfg, out_dir, out, log);
        case Mode::Threshold: {
            const Grid grid = make_grid(cfg.grid.R, cfg.grid.Nr, cfg.grid.Nz);
            out << format_number(epsilon_threshold(cfg.init, cfg.diagnostics.constants, profile_grid(cfg.init, grid)))
                << '\n';
            return ExitStatus::Ok;
        }
        case Mode::RieszSurvey: return run_survey(cfg, out_dir, out);
    }
    return ExitStatus::Internal;
}

void apply_options(ExperimentConfig& cfg, const RunOptions& options) {
    if (options.deterministic) cfg.deterministic = true;
    if (options.seed) cfg.survey.seed = *options.seed;
}

std::filesystem::path output_dir(const ExperimentConfig& cfg, const RunOptions& options) {
    return options.out_dir ? *options.out_dir : std::filesystem::path(cfg.output_dir);
}

}  // namespace

ExitStatus run_experiment(ExperimentConfig cfg, const RunOptions& options, std::ostream& out, std::ostream& log) {
    if (options.resume_from) return resume(*options.resume_from, std::move(cfg), options, out, log);
    return guarded(log, [&] {
        apply_options(cfg, options);
        validate_config(cfg);
        return dispatch(cfg, std::nullopt, output_dir(cfg, options), out, log);
    });
}

ExitStatus resume(const std::filesystem::path& checkpoint, ExperimentConfig cfg, const RunOptions& options,
                  std::ostream& out, std::ostream& log) {
    return guarded(log, [&] {
        apply_options(cfg, options);
        if (cfg.mode != Mode::Simulate) throw ConfigError("resume is only available in simulate mode");
        validate_config(cfg);
        const Checkpoint ckpt = read_checkpoint(checkpoint);
        check_compatible(ckpt, cfg);
        return dispatch(cfg, ckpt, output_dir(cfg, options), out, log);
    });
}

}  // namespace axisw
