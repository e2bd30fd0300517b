// Copyright 2026 The hqmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hqmm/commands.hpp"

#include "hqmm/ensemble.hpp"
#include "hqmm/model_io.hpp"
#include "hqmm/rng.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace hqmm {

using nlohmann::json;

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Io: return exit_code::kIo;
        case ErrorKind::NumericFailure:
        case ErrorKind::SymbolProbabilityZero: return exit_code::kNumeric;
        default: return exit_code::kValidation;
    }
}

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
    std::string s(buf.data(), res.ptr);
    if (std::isfinite(x) && s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

std::string format_probability(double p) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), p, std::chars_format::fixed, 12);
    return std::string(buf.data(), res.ptr);
}

std::filesystem::path report_path(const std::filesystem::path& out) {
    return std::filesystem::path(out.string() + ".report.json");
}

namespace {

/// A model reduced to the HQMM the sampling commands run on.
struct Prepared {
    Hqmm hqmm;
    std::optional<Discretization> discretization;
};

Prepared prepare(const Model& model, std::ostream& err) {
    if (const auto* h = std::get_if<Hmm>(&model)) return {embed_hmm(*h), std::nullopt};
    if (const auto* q = std::get_if<Hqmm>(&model)) return {*q, std::nullopt};
    const auto& os = std::get<OpenSystemModel>(model);
    Discretization disc = discretize(os.spec);
    for (const auto& w : disc.warnings) err << "warning: " << w << "\n";
    Hqmm hqmm(disc.kraus, os.initial);
    return {std::move(hqmm), std::move(disc)};
}

const OpenSystemModel& require_open_system(const Model& model, const char* command) {
    const auto* os = std::get_if<OpenSystemModel>(&model);
    if (!os) {
        throw Error(ErrorKind::Validation, std::string(command) + " needs an open_system model, got " +
                                               std::string(kind_name(model)));
    }
    return *os;
}

json report_base(const char* command, const std::filesystem::path& model, const LoadedModel& loaded) {
    return {{"tool", "hqmm"},
            {"format_version", kFormatVersion},
            {"command", command},
            {"model", model.string()},
            {"kind", kind_name(loaded.model)},
            {"input_digest", loaded.digest}};
}

void write_report(const std::filesystem::path& out, const json& report) {
    write_file(report_path(out), report.dump(2) + "\n");
}

std::optional<std::map<Sequence, double>> exact_distribution(const Model& model, const Prepared& prepared,
                                                             std::size_t length) {
    try {
        if (const auto* h = std::get_if<Hmm>(&model)) return hmm_enumerate(*h, length);
        return hqmm_enumerate(prepared.hqmm, length);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::EnumerationTooLarge) return std::nullopt;
        throw;
    }
}

struct Row {
    std::uint64_t count = 0;
    std::optional<double> exact;
};

std::string distribution_csv(const EmpiricalDistribution& emp,
                             const std::optional<std::map<Sequence, double>>& exact) {
    std::map<std::string, std::pair<Sequence, Row>> rows;
    for (const auto& [seq, c] : emp.counts()) rows[render_sequence(seq)] = {seq, Row{c, std::nullopt}};
    if (exact) {
        for (const auto& [seq, p] : *exact) {
            auto it = rows.find(render_sequence(seq));
            if (it != rows.end()) {
                it->second.second.exact = p;
            } else if (p > 0.0) {
                rows[render_sequence(seq)] = {seq, Row{0, p}};
            }
        }
        // Observed but absent from the enumeration cannot happen; enumerations
        // are exhaustive.
        for (auto& [key, entry] : rows) {
            if (!entry.second.exact) entry.second.exact = 0.0;
        }
    }
    std::ostringstream csv;
    csv << "sequence,count,frequency,exact_prob,std_err\n";
    for (const auto& [key, entry] : rows) {
        const auto& [seq, row] = entry;
        csv << key << ',' << row.count << ',' << format_double(emp.frequency(seq)) << ','
            << (row.exact ? format_double(*row.exact) : std::string()) << ','
            << format_double(emp.standard_error(seq)) << '\n';
    }
    return csv.str();
}

}  // namespace

int cmd_prob(const ProbOptions& opt, std::ostream& out, std::ostream& err) {
    const LoadedModel loaded = load_model(opt.model);
    double p = 0.0;
    Sequence seq;
    if (const auto* h = std::get_if<Hmm>(&loaded.model)) {
        seq = parse_sequence(opt.sequence, h->alphabet());
        p = hmm_sequence_probability(*h, seq);
    } else {
        const Prepared prepared = prepare(loaded.model, err);
        seq = parse_sequence(opt.sequence, prepared.hqmm.alphabet());
        p = sequence_probability(prepared.hqmm, seq);
    }
    out << format_probability(p) << "\n";
    if (opt.out) {
        write_file(*opt.out, "sequence,probability\n" + render_sequence(seq) + "," + format_double(p) + "\n");
        json report = report_base("prob", opt.model, loaded);
        report["parameters"] = {{"sequence", render_sequence(seq)}};
        report["outputs"] = {{"csv", opt.out->string()}, {"probability", p}};
        write_report(*opt.out, report);
    }
    return exit_code::kSuccess;
}

int cmd_sample(const SampleOptions& opt, std::ostream& out, std::ostream& err) {
    if (opt.n < 1) throw Error(ErrorKind::Validation, "--n must be at least 1");
    const LoadedModel loaded = load_model(opt.model);
    const Prepared prepared = prepare(loaded.model, err);
    const auto exact = exact_distribution(loaded.model, prepared, opt.length);
    const EnsembleConfig cfg{opt.n, opt.length, opt.seed, false, opt.threads};
    const EnsembleResult result = run_ensemble(prepared.hqmm, cfg);

    write_file(opt.out, distribution_csv(result.distribution, exact));
    json report = report_base("sample", opt.model, loaded);
    report["parameters"] = {{"length", opt.length}, {"n", opt.n}};
    report["seeds"] = {{"master_seed", opt.seed}};
    report["generator"] = result.generator;
    report["outputs"] = {{"csv", opt.out.string()}, {"exact_available", exact.has_value()}};
    write_report(opt.out, report);

    out << "sampled " << opt.n << " sequences of length " << opt.length << " ("
        << result.distribution.counts().size() << " distinct) -> " << opt.out.string() << "\n";
    if (exact) out << "total_variation " << format_double(total_variation(result.distribution, *exact)) << "\n";
    return exit_code::kSuccess;
}

int cmd_evolve(const EvolveOptions& opt, std::ostream& out, std::ostream&) {
    const LoadedModel loaded = load_model(opt.model);
    const OpenSystemModel& os = require_open_system(loaded.model, "evolve");
    const Index d = os.spec.dim();

    std::ostringstream csv;
    csv << "t";
    for (Index r = 0; r < d; ++r) {
        for (Index c = 0; c < d; ++c) csv << ",rho_" << r << '_' << c << "_re,rho_" << r << '_' << c << "_im";
    }
    csv << '\n';
    std::optional<DensityMatrix> last;
    rk4_trajectory(os.spec, os.initial, opt.t_final, opt.steps, [&](double t, const DensityMatrix& rho) {
        csv << format_double(t);
        for (Index r = 0; r < d; ++r) {
            for (Index c = 0; c < d; ++c) {
                csv << ',' << format_double(rho.matrix()(r, c).real()) << ','
                    << format_double(rho.matrix()(r, c).imag());
            }
        }
        csv << '\n';
        last = rho;
    });
    write_file(opt.out, csv.str());
    json report = report_base("evolve", opt.model, loaded);
    report["parameters"] = {{"t_final", opt.t_final}, {"steps", opt.steps}};
    report["outputs"] = {{"csv", opt.out.string()}};
    write_report(opt.out, report);

    out << "evolved to t = " << format_double(opt.t_final) << " in " << opt.steps << " RK4 steps -> "
        << opt.out.string() << "\n";
    out << "final populations";
    for (Index k = 0; k < d; ++k) out << ' ' << format_double(last->matrix()(k, k).real());
    out << "\n";
    return exit_code::kSuccess;
}

int cmd_discretize(const DiscretizeOptions& opt, std::ostream& out, std::ostream& err) {
    const LoadedModel loaded = load_model(opt.model);
    const OpenSystemModel& os = require_open_system(loaded.model, "discretize");
    const Discretization disc = discretize(os.spec);
    for (const auto& w : disc.warnings) err << "warning: " << w << "\n";
    write_file(opt.out, serialize_model(Hqmm(disc.kraus, os.initial)));

    json report = report_base("discretize", opt.model, loaded);
    report["parameters"] = {{"dt", os.spec.dt()}};
    report["outputs"] = {{"model", opt.out.string()},
                         {"completeness_defect", disc.defect},
                         {"defect_constant", disc.defect_constant},
                         {"stiffness", disc.stiffness}};
    write_report(opt.out, report);

    out << "wrote " << disc.kraus.operators().size() << " Kraus operators -> " << opt.out.string() << "\n";
    out << "completeness_defect " << format_double(disc.defect) << "\n";
    out << "defect_constant " << format_double(disc.defect_constant) << " (defect <= C*dt^2)\n";
    out << "stiffness " << format_double(disc.stiffness) << "\n";
    return exit_code::kSuccess;
}

int cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err) {
    if (opt.n < 1) throw Error(ErrorKind::Validation, "--n must be at least 1");
    const LoadedModel loaded = load_model(opt.model);
    const OpenSystemModel& os = require_open_system(loaded.model, "compare");
    const Prepared prepared = prepare(loaded.model, err);
    const auto exact = exact_distribution(loaded.model, prepared, opt.length);
    const double t_final = static_cast<double>(opt.length) * os.spec.dt();
    const EnsembleConfig cfg{opt.n, opt.length, opt.seed, false, opt.threads};
    const EnsembleComparison cmp = ensemble_vs_master(os.spec, os.initial, cfg, t_final);

    bool pass = cmp.pass;
    std::optional<double> tv;
    std::optional<double> tv_bound;
    if (exact) {
        tv = total_variation(cmp.distribution, *exact);
        const double defect = prepared.discretization->defect;
        tv_bound = 3.0 * total_variation_noise_floor(*exact, opt.n) +
                   static_cast<double>(opt.length) * defect + 1e-12;
        pass = pass && *tv <= *tv_bound;
    }

    write_file(opt.out, distribution_csv(cmp.distribution, exact));
    json report = report_base("compare", opt.model, loaded);
    report["parameters"] = {{"length", opt.length}, {"n", opt.n}, {"t_final", t_final}};
    report["seeds"] = {{"master_seed", opt.seed}};
    report["generator"] = kGeneratorId;
    json metrics = {{"trace_distance", cmp.trace_distance},
                    {"statistical_bound", cmp.statistical_bound},
                    {"bias_bound", cmp.bias_bound},
                    {"completeness_defect", prepared.discretization->defect},
                    {"pass", pass}};
    if (tv) {
        metrics["total_variation"] = *tv;
        metrics["total_variation_bound"] = *tv_bound;
    }
    report["outputs"] = {{"csv", opt.out.string()}, {"metrics", metrics}};
    write_report(opt.out, report);

    out << "completeness_defect " << format_double(prepared.discretization->defect) << "\n";
    out << "trace_distance " << format_double(cmp.trace_distance) << " bound "
        << format_double(cmp.statistical_bound + cmp.bias_bound) << " (3/sqrt(N) "
        << format_double(cmp.statistical_bound) << " + C*dt " << format_double(cmp.bias_bound) << ")\n";
    if (tv) {
        out << "total_variation " << format_double(*tv) << " bound " << format_double(*tv_bound) << "\n";
    } else {
        out << "total_variation skipped (enumeration of " << prepared.hqmm.alphabet().size() << "^"
            << opt.length << " sequences infeasible)\n";
    }
    out << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? exit_code::kSuccess : exit_code::kFail;
}

}  // namespace hqmm
