#include "weylwalk/cli.hpp"

#include "weylwalk/algebra.hpp"
#include "weylwalk/limits.hpp"
#include "weylwalk/spectral.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace weylwalk::cli {

namespace {

std::vector<double> parse_number_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        try {
            size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
            if (pos != item.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": cannot parse number '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
    return out;
}

} // namespace

ChamberPoint parse_point(const std::string& text, Chamber cs) {
    std::string body = text;
    if (body.size() >= 2 && body.front() == '(' && body.back() == ')')
        body = body.substr(1, body.size() - 2);
    const std::vector<double> vals = parse_number_list(body, "chamber point");
    Eigen::VectorXd v(vals.size());
    for (size_t i = 0; i < vals.size(); ++i) v[static_cast<int>(i)] = vals[i];
    try {
        return ChamberPoint(cs, v);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("chamber point '" + text + "': " + e.what());
    }
}

DiscreteMeasure parse_measure(const std::string& text, Chamber cs) {
    std::vector<ChamberPoint> atoms;
    std::vector<double> weights;
    std::string atom_spec;
    std::istringstream is(text);
    while (std::getline(is, atom_spec, ';')) {
        if (atom_spec.empty()) continue;
        const size_t close = atom_spec.rfind(':');
        if (close == std::string::npos)
            throw ConfigError("measure atom '" + atom_spec + "' must look like (t1,...,tq):w");
        atoms.push_back(parse_point(atom_spec.substr(0, close), cs));
        try {
            weights.push_back(std::stod(atom_spec.substr(close + 1)));
        } catch (const std::exception&) {
            throw ConfigError("measure atom '" + atom_spec + "': bad weight");
        }
    }
    if (atoms.empty()) throw ConfigError("measure: no atoms parsed");
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw ConfigError("measure: weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ConfigError("measure: weights sum to " + std::to_string(total) + ", not 1");
    for (double& w : weights) w /= total;
    try {
        return DiscreteMeasure(std::move(atoms), std::move(weights));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("measure: ") + e.what());
    }
}

CaseParams RunConfig::case_params() const {
    if (cs == Chamber::A) return CaseParams::case_a(q, field);
    return CaseParams::case_bc(BcParams(q, field, p));
}

nlohmann::json RunConfig::echo() const {
    nlohmann::json j;
    j["subcommand"] = subcommand;
    j["case"] = cs == Chamber::A ? "a" : "bc";
    j["q"] = q;
    j["d"] = field.d;
    if (cs == Chamber::B) j["p"] = p;
    j["k"] = k;
    j["R"] = R;
    j["n_mc"] = n_mc;
    j["N"] = N;
    j["alpha"] = alpha;
    j["seed"] = seed;
    j["workers"] = workers;
    j["format"] = format;
    if (nu) {
        nlohmann::json atoms = nlohmann::json::array();
        for (size_t i = 0; i < nu->atoms.size(); ++i) {
            nlohmann::json a;
            nlohmann::json tv = nlohmann::json::array();
            for (int c = 0; c < nu->atoms[i].v.size(); ++c) tv.push_back(nu->atoms[i].v[c]);
            a["t"] = tv;
            a["weight"] = nu->weights[i];
            atoms.push_back(a);
        }
        j["nu"] = atoms;
    }
    auto point_json = [](const ChamberPoint& pt) {
        nlohmann::json a = nlohmann::json::array();
        for (int c = 0; c < pt.v.size(); ++c) a.push_back(pt.v[c]);
        return a;
    };
    if (t) j["t"] = point_json(*t);
    if (s) j["s"] = point_json(*s);
    if (!lambda.empty()) j["lambda"] = lambda;
    return j;
}

namespace {

struct RawArgs {
    std::string case_str = "bc";
    int q = 2;
    int d = 1;
    double p = 4.0;
    std::string nu_str, t_str, s_str, lambda_str;
    int k = 100, R = 200, n_mc = 100000, N = 20000, n_draws = 1000;
    double alpha = 0.001;
    uint64_t seed = 0;
    int workers = 1;
    std::string out_path, format = "json", which = "bc", accumulation = "exact", config_file;
};

void finalize_config(const std::string& sub, const RawArgs& raw, RunConfig& cfg) {
    cfg.subcommand = sub;
    if (raw.case_str == "a" || raw.case_str == "A")
        cfg.cs = Chamber::A;
    else if (raw.case_str == "bc" || raw.case_str == "BC" || raw.case_str == "b")
        cfg.cs = Chamber::B;
    else
        throw ConfigError("case must be 'a' or 'bc', got '" + raw.case_str + "'");
    if (raw.q < 1) throw ConfigError("q must be >= 1");
    cfg.q = raw.q;
    try {
        cfg.field = Field::from_d(raw.d);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    cfg.p = raw.p;
    if (cfg.cs == Chamber::B) {
        try {
            BcParams(cfg.q, cfg.field, cfg.p).validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (!raw.nu_str.empty()) {
        cfg.nu = parse_measure(raw.nu_str, cfg.cs);
        if (cfg.nu->q() != cfg.q) throw ConfigError("measure atoms have wrong dimension for q");
    }
    if (!raw.t_str.empty()) {
        cfg.t = parse_point(raw.t_str, cfg.cs);
        if (cfg.t->q() != cfg.q) throw ConfigError("--t has wrong dimension for q");
    }
    if (!raw.s_str.empty()) {
        cfg.s = parse_point(raw.s_str, cfg.cs);
        if (cfg.s->q() != cfg.q) throw ConfigError("--s has wrong dimension for q");
    }
    if (!raw.lambda_str.empty()) {
        std::string body = raw.lambda_str;
        if (body.size() >= 2 && body.front() == '(' && body.back() == ')')
            body = body.substr(1, body.size() - 2);
        cfg.lambda = parse_number_list(body, "--lambda");
        if (static_cast<int>(cfg.lambda.size()) != cfg.q)
            throw ConfigError("--lambda has wrong dimension for q");
    }
    if (raw.k < 0) throw ConfigError("k must be >= 0");
    if (raw.R < 1) throw ConfigError("R must be >= 1");
    if (raw.n_mc < 2) throw ConfigError("n-mc must be >= 2");
    if (raw.workers < 1) throw ConfigError("workers must be >= 1");
    cfg.k = raw.k;
    cfg.R = raw.R;
    cfg.n_mc = raw.n_mc;
    cfg.N = raw.N;
    cfg.n_draws = raw.n_draws;
    cfg.alpha = raw.alpha;
    cfg.seed = raw.seed;
    cfg.workers = raw.workers;
    cfg.out_path = raw.out_path;
    if (raw.format != "json" && raw.format != "csv")
        throw ConfigError("format must be 'json' or 'csv', got '" + raw.format + "'");
    cfg.format = raw.format;
    if (raw.which != "a" && raw.which != "bc")
        throw ConfigError("--which must be 'a' or 'bc'");
    cfg.oracle_which = raw.which;
    if (raw.accumulation != "exact" && raw.accumulation != "qr")
        throw ConfigError("--accumulation must be 'exact' or 'qr'");
    cfg.accumulation = raw.accumulation;
}

} // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app{"random walks on Weyl chambers: convolution kernels, moment functions and limit-theorem experiments"};
    app.require_subcommand(1);

    RawArgs raw;
    const std::vector<std::string> subs = {"walk",  "spherical", "moments", "dispersion",
                                           "lln",   "clt",       "oracle",  "lemma-suite"};
    std::map<std::string, std::map<std::string, CLI::Option*>> opts;
    for (const auto& name : subs) {
        CLI::App* sc = app.add_subcommand(name);
        auto& m = opts[name];
        m["case"] = sc->add_option("--case", raw.case_str, "chamber family: a or bc");
        m["q"] = sc->add_option("--q", raw.q, "rank");
        m["d"] = sc->add_option("--d", raw.d, "field dimension: 1 (R), 2 (C), 4 (H)");
        m["p"] = sc->add_option("--p", raw.p, "BC dimension parameter, must exceed 2q-1");
        m["nu"] = sc->add_option("--nu", raw.nu_str, "measure spec \"(t1,...,tq):w;...\"");
        m["t"] = sc->add_option("--t", raw.t_str, "chamber point \"(t1,...,tq)\"");
        m["s"] = sc->add_option("--s", raw.s_str, "chamber point \"(s1,...,sq)\"");
        m["lambda"] = sc->add_option("--lambda", raw.lambda_str,
                                     "real spectral displacement; evaluates phi at -i rho - lambda");
        m["k"] = sc->add_option("--k", raw.k, "number of walk steps");
        m["R"] = sc->add_option("--R", raw.R, "number of replications");
        m["n-mc"] = sc->add_option("--n-mc", raw.n_mc, "Monte Carlo samples per estimate");
        m["N"] = sc->add_option("--N", raw.N, "samples per oracle arm");
        m["n-draws"] = sc->add_option("--n-draws", raw.n_draws, "draws for the lemma suite");
        m["alpha"] = sc->add_option("--alpha", raw.alpha, "test level before Bonferroni");
        m["seed"] = sc->add_option("--seed", raw.seed, "master seed")->envname("WEYLWALK_SEED");
        m["workers"] = sc->add_option("--workers", raw.workers, "parallel workers (results independent of N)");
        m["out"] = sc->add_option("--out", raw.out_path, "artifact path");
        m["format"] = sc->add_option("--format", raw.format, "artifact format: json or csv");
        m["which"] = sc->add_option("--which", raw.which, "oracle variant: a or bc");
        m["accumulation"] =
            sc->add_option("--accumulation", raw.accumulation, "group-product mode: exact or qr");
        m["config"] = sc->add_option("--config", raw.config_file, "JSON config file");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    CLI::App* active = app.get_subcommands().at(0);
    const std::string sub = active->get_name();

    if (!raw.config_file.empty()) {
        std::ifstream in(raw.config_file);
        if (!in) throw ConfigError("cannot open config file " + raw.config_file);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config file: ") + e.what());
        }
        auto& m = opts[sub];
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string key = it.key();
            auto found = m.find(key);
            if (found == m.end()) throw ConfigError("config file: unknown field '" + key + "'");
            if (found->second->count() > 0)
                throw ConfigError("field '" + key + "' given both on the command line and in the config file");
            // Route through the option's own conversion for uniform validation.
            std::string text = it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
            try {
                found->second->add_result(text);
                found->second->run_callback();
            } catch (const CLI::Error& e) {
                throw ConfigError("config file field '" + key + "': " + e.what());
            }
        }
    }

    RunConfig cfg;
    finalize_config(sub, raw, cfg);
    return cfg;
}

void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    char buf[40];
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw std::invalid_argument("emit_csv: row width mismatch");
        for (size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failure on " + path);
}

namespace {

std::string default_out_path(const std::string& sub, const std::string& ext) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", std::localtime(&tt));
    return "weylwalk-out/" + sub + "-" + stamp + "." + ext;
}

void write_artifact(const nlohmann::json& j, const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

nlohmann::json vec_json(const Eigen::VectorXd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

nlohmann::json mat_json(const Eigen::MatrixXd& m) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        a.push_back(row);
    }
    return a;
}

int run_report(const ExperimentReport& rep, const RunConfig& cfg, const std::string& path) {
    nlohmann::json j = rep.to_json();
    j["cli_config"] = cfg.echo();
    write_artifact(j, path);
    std::cout << rep.summary();
    std::cout << "artifact: " << path << " (wall " << rep.wall_seconds << " s)\n";
    return rep.pass ? kExitOk : kExitTestFailure;
}

} // namespace

int run(const RunConfig& cfg) {
    const std::string ext = cfg.format == "csv" ? "csv" : "json";
    const std::string path =
        cfg.out_path.empty() ? default_out_path(cfg.subcommand, ext) : cfg.out_path;
    {
        const std::filesystem::path p(path);
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    }
    RngStream rng(cfg.seed, 0);

    if (cfg.subcommand == "walk") {
        if (!cfg.nu) throw ConfigError("walk needs --nu");
        const Trajectory tr = walk(*cfg.nu, cfg.k, cfg.case_params(), rng);
        if (cfg.format == "csv") {
            std::vector<std::string> header = {"step"};
            for (int c = 1; c <= cfg.q; ++c) header.push_back("coord_" + std::to_string(c));
            std::vector<std::vector<double>> rows;
            for (size_t i = 0; i < tr.points.size(); ++i) {
                std::vector<double> row = {double(i)};
                for (int c = 0; c < cfg.q; ++c) row.push_back(tr.points[i].v[c]);
                rows.push_back(std::move(row));
            }
            emit_csv(header, rows, path);
        } else {
            nlohmann::json j;
            j["config"] = cfg.echo();
            j["seed"] = cfg.seed;
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& pt : tr.points) pts.push_back(vec_json(pt.v));
            j["points"] = pts;
            write_artifact(j, path);
        }
        std::cout << "walk: " << tr.points.size() - 1 << " steps -> " << path << "\n";
        return kExitOk;
    }

    const SpectralParams sp = cfg.cs == Chamber::A
                                  ? SpectralParams::case_a(cfg.q, cfg.field)
                                  : SpectralParams::case_bc(BcParams(cfg.q, cfg.field, cfg.p));

    if (cfg.subcommand == "spherical") {
        if (!cfg.t) throw ConfigError("spherical needs --t");
        if (cfg.lambda.empty()) throw ConfigError("spherical needs --lambda");
        Eigen::VectorXcd param(cfg.q);
        for (int r = 0; r < cfg.q; ++r) param[r] = std::complex<double>(-cfg.lambda[r], -sp.rho[r]);
        const ComplexEstimate est = spherical(param, *cfg.t, sp, cfg.n_mc, rng, cfg.workers);
        nlohmann::json j;
        j["config"] = cfg.echo();
        j["seed"] = cfg.seed;
        j["value"] = {{"re", est.value.real()}, {"im", est.value.imag()}};
        j["stderr"] = est.se;
        j["n"] = est.n;
        write_artifact(j, path);
        std::cout << "phi(-i rho - lambda) = " << est.value.real() << " + " << est.value.imag()
                  << "i (stderr " << est.se << ") -> " << path << "\n";
        return kExitOk;
    }

    if (cfg.subcommand == "moments") {
        if (!cfg.t) throw ConfigError("moments needs --t");
        const LocalMoments lm = local_moments(*cfg.t, sp, cfg.n_mc, rng, cfg.workers);
        nlohmann::json j;
        j["config"] = cfg.echo();
        j["seed"] = cfg.seed;
        j["m1"] = vec_json(lm.m1.value);
        j["m1_stderr"] = vec_json(lm.m1.se);
        j["m2"] = mat_json(lm.m2.value);
        j["m2_stderr"] = mat_json(lm.m2.se);
        j["sigma2"] = mat_json(lm.sigma2.value);
        j["sigma2_stderr"] = mat_json(lm.sigma2.se);
        j["n"] = lm.m1.n;
        write_artifact(j, path);
        std::cout << "moment functions at t -> " << path << "\n";
        return kExitOk;
    }

    if (cfg.subcommand == "dispersion") {
        if (!cfg.nu) throw ConfigError("dispersion needs --nu");
        const MeasureMoments mm = measure_moments(*cfg.nu, sp, cfg.n_mc, rng, cfg.workers);
        nlohmann::json j;
        j["config"] = cfg.echo();
        j["seed"] = cfg.seed;
        j["m1_nu"] = vec_json(mm.m1.value);
        j["m1_nu_stderr"] = vec_json(mm.m1.se);
        j["sigma2_nu"] = mat_json(mm.sigma2.value);
        j["sigma2_nu_stderr"] = mat_json(mm.sigma2.se);
        j["n"] = mm.m1.n;
        write_artifact(j, path);
        std::cout << "dispersion and covariance of nu -> " << path << "\n";
        return kExitOk;
    }

    if (cfg.subcommand == "lln") {
        if (!cfg.nu) throw ConfigError("lln needs --nu");
        return run_report(lln_experiment(*cfg.nu, cfg.case_params(), cfg.k, cfg.R, cfg.n_mc, rng,
                                         cfg.workers),
                          cfg, path);
    }

    if (cfg.subcommand == "clt") {
        if (!cfg.nu) throw ConfigError("clt needs --nu");
        return run_report(clt_experiment(*cfg.nu, cfg.case_params(), cfg.k, cfg.R, cfg.n_mc,
                                         cfg.alpha, rng, cfg.workers),
                          cfg, path);
    }

    if (cfg.subcommand == "oracle") {
        if (cfg.oracle_which == "a") {
            if (!cfg.nu) throw ConfigError("oracle --which a needs --nu");
            const Accumulation acc =
                cfg.accumulation == "qr" ? Accumulation::QR : Accumulation::Exact;
            return run_report(group_oracle_A(cfg.q, cfg.field, *cfg.nu, cfg.k, cfg.N, rng,
                                             cfg.workers, acc),
                              cfg, path);
        }
        if (!cfg.s || !cfg.t) throw ConfigError("oracle --which bc needs --s and --t");
        const int p_int = static_cast<int>(std::lround(cfg.p));
        if (std::abs(cfg.p - p_int) > 1e-12)
            throw ConfigError("oracle --which bc needs an integer p");
        return run_report(group_oracle_BC(cfg.q, cfg.field, p_int, *cfg.s, *cfg.t, cfg.N, rng,
                                          cfg.workers),
                          cfg, path);
    }

    if (cfg.subcommand == "lemma-suite") {
        return run_report(lemma_suite(cfg.q, cfg.field, cfg.n_draws, rng), cfg, path);
    }

    throw ConfigError("unknown subcommand " + cfg.subcommand);
}

int main_entry(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const RunConfig cfg = parse_config(args);
        return run(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "numeric domain error: " << e.what() << "\n";
        return kExitNumericDomain;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace weylwalk::cli
