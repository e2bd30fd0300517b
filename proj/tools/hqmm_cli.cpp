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
#include "hqmm/error.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace hqmm;

    CLI::App app{"Hidden quantum Markov models and open quantum systems with instantaneous feedback"};
    app.require_subcommand(1);

    ProbOptions prob;
    auto* prob_cmd = app.add_subcommand("prob", "Probability of one output sequence");
    prob_cmd->add_option("--model", prob.model, "Model file")->required();
    prob_cmd->add_option("--sequence", prob.sequence, "Output sequence, e.g. 0110 or \"a b\"")->required();
    prob_cmd->add_option("--out", prob.out, "Optional CSV (a run report is written alongside)");

    SampleOptions sample;
    auto* sample_cmd = app.add_subcommand("sample", "Sample an ensemble of output sequences");
    sample_cmd->add_option("--model", sample.model, "Model file")->required();
    sample_cmd->add_option("--length", sample.length, "Symbols per trajectory")->required();
    sample_cmd->add_option("--n", sample.n, "Number of trajectories")->required()->check(CLI::PositiveNumber);
    sample_cmd->add_option("--seed", sample.seed, "Master seed")->required();
    sample_cmd->add_option("--out", sample.out, "Output CSV")->required();
    sample_cmd->add_option("--threads", sample.threads, "Worker threads (0 = all cores)");

    EvolveOptions evolve;
    auto* evolve_cmd = app.add_subcommand("evolve", "Integrate the master equation with RK4");
    evolve_cmd->add_option("--model", evolve.model, "open_system model file")->required();
    evolve_cmd->add_option("--t-final", evolve.t_final, "Final time")->required();
    evolve_cmd->add_option("--steps", evolve.steps, "RK4 steps")->required()->check(CLI::PositiveNumber);
    evolve_cmd->add_option("--out", evolve.out, "Output CSV")->required();

    DiscretizeOptions disc;
    auto* disc_cmd = app.add_subcommand("discretize", "Compile an open system into an HQMM model file");
    disc_cmd->add_option("--model", disc.model, "open_system model file")->required();
    disc_cmd->add_option("--out", disc.out, "Output hqmm model file")->required();

    CompareOptions compare;
    auto* compare_cmd = app.add_subcommand("compare", "Check the discretized HQMM against the master equation");
    compare_cmd->add_option("--model", compare.model, "open_system model file")->required();
    compare_cmd->add_option("--length", compare.length, "Symbols per trajectory")->required();
    compare_cmd->add_option("--n", compare.n, "Number of trajectories")->required()->check(CLI::PositiveNumber);
    compare_cmd->add_option("--seed", compare.seed, "Master seed")->required();
    compare_cmd->add_option("--out", compare.out, "Output CSV")->required();
    compare_cmd->add_option("--threads", compare.threads, "Worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_code::kValidation;
    }

    try {
        if (*prob_cmd) return cmd_prob(prob, std::cout, std::cerr);
        if (*sample_cmd) return cmd_sample(sample, std::cout, std::cerr);
        if (*evolve_cmd) return cmd_evolve(evolve, std::cout, std::cerr);
        if (*disc_cmd) return cmd_discretize(disc, std::cout, std::cerr);
        if (*compare_cmd) return cmd_compare(compare, std::cout, std::cerr);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::kNumeric;
    }
    return exit_code::kValidation;
}
