#include "axw/error.hpp"
#include "axw/experiments.hpp"
#include "axw/filtration.hpp"
#include "axw/matchdist.hpp"
#include "axw/mesh.hpp"
#include "axw/persistence.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<double> parse_reals(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::logic_error&) {
            used = 0;
        }
        if (used == 0 || used != item.size())
            throw axw::ParseError("bad number '" + item + "' in '" + text + "'");
        out.push_back(x);
    }
    if (out.empty())
        throw axw::ParseError("empty list");
    return out;
}

std::vector<int> parse_ints(const std::string& text)
{
    std::vector<int> out;
    for (double x : parse_reals(text)) {
        if (x != static_cast<int>(x))
            throw axw::ParseError("integer expected in '" + text + "'");
        out.push_back(static_cast<int>(x));
    }
    return out;
}

// "a..b" (inclusive) or a comma-separated list.
std::vector<int> parse_range(const std::string& text)
{
    auto dots = text.find("..");
    if (dots == std::string::npos)
        return parse_ints(text);
    int lo = parse_ints(text.substr(0, dots)).at(0);
    int hi = parse_ints(text.substr(dots + 2)).at(0);
    if (hi < lo)
        throw axw::ParseError("empty range '" + text + "'");
    std::vector<int> out;
    for (int n = lo; n <= hi; ++n)
        out.push_back(n);
    return out;
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw axw::ParseError("cannot write " + path);
    return out;
}

void write_mesh(const std::string& path, const axw::MeshWithFunction& mesh)
{
    if (path.empty() || path == "-")
        axw::write_voff(std::cout, mesh);
    else
        axw::save_voff(path, mesh);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rank invariants and matching distances of vector-valued sublevel filtrations"};
    app.require_subcommand(1);

    int precision = axw::kDefaultPrecision;
    app.add_option("--precision", precision, "Decimal digits kept when reading vertex values")
        ->check(CLI::Range(0, 15));

    // subdivide
    auto* sub = app.add_subcommand("subdivide", "Barycentric subdivision with interpolated values");
    std::string sub_in, sub_out, sub_mode = "axiswise";
    int sub_repeat = 1;
    sub->add_option("mesh", sub_in, "Input VOFF")->required();
    sub->add_option("-o,--output", sub_out, "Output VOFF (stdout when omitted)");
    sub->add_option("--mode", sub_mode, "linear or axiswise")->check(CLI::IsMember({"linear", "axiswise"}));
    sub->add_option("--repeat", sub_repeat, "Number of subdivision rounds")->check(CLI::PositiveNumber);

    // rank
    auto* rank = app.add_subcommand("rank", "Discrete rank invariant rho(alpha, beta) in one degree");
    std::string rank_in, rank_alpha, rank_beta;
    int rank_degree = 0;
    unsigned rank_prime = 11;
    rank->add_option("mesh", rank_in, "Input VOFF")->required();
    rank->add_option("--alpha", rank_alpha, "Lower level a1,a2,...")->required();
    rank->add_option("--beta", rank_beta, "Upper level b1,b2,...")->required();
    rank->add_option("--degree", rank_degree, "Homology degree")->check(CLI::NonNegativeNumber);
    rank->add_option("--prime", rank_prime, "Coefficient field Z_p");

    // lambda
    auto* lambda = app.add_subcommand("lambda", "Finite representative level set as CSV");
    std::string lambda_in;
    lambda->add_option("mesh", lambda_in, "Input VOFF")->required();

    // diagram
    auto* diagram = app.add_subcommand("diagram", "Persistence diagrams along one admissible line");
    std::string diagram_in, diagram_pair, diagram_degrees = "0,1";
    unsigned diagram_prime = 11;
    diagram->add_option("mesh", diagram_in, "Input VOFF")->required();
    diagram->add_option("--pair", diagram_pair, "Line parameters a,b: l = (a, 1-a), b = (b, -b)")->required();
    diagram->add_option("--degrees", diagram_degrees, "Homology degrees");
    diagram->add_option("--prime", diagram_prime, "Coefficient field Z_p");

    // dist
    auto* dist = app.add_subcommand("dist", "Approximate two-parameter matching distance");
    std::string dist_a, dist_b, dist_degrees = "0,1", dist_trace, dist_output;
    double dist_eps = 0.0;
    unsigned dist_prime = 11, dist_threads = 1;
    bool dist_unnormalized = false;
    dist->add_option("meshA", dist_a, "First VOFF")->required();
    dist->add_option("meshB", dist_b, "Second VOFF")->required();
    dist->add_option("--epsilon", dist_eps, "Certified tolerance")->required();
    dist->add_option("--degrees", dist_degrees, "Homology degrees");
    dist->add_option("--prime", dist_prime, "Coefficient field Z_p");
    dist->add_option("--threads", dist_threads, "Worker threads")->check(CLI::PositiveNumber);
    dist->add_option("--trace", dist_trace, "Per-pair CSV a,b,degree,d1,rescaled");
    dist->add_option("--output", dist_output, "Summary CSV degree,dtilde,epsilon,argmax_a,argmax_b");
    dist->add_flag("--allow-unnormalized", dist_unnormalized, "Accept inputs outside [0,1] (voids the certificate)");

    // experiment
    auto* exper = app.add_subcommand("experiment", "Interpolation-error statistics on random functions");
    std::string exp_kind, exp_Ns, exp_out;
    std::size_t exp_samples = 100;
    std::uint64_t exp_seed = 0;
    bool exp_independent = false;
    unsigned exp_threads = 1;
    int exp_reference = 10;
    exper->add_option("kind", exp_kind, "circle or torus")->required()->check(CLI::IsMember({"circle", "torus"}));
    exper->add_option("--samples", exp_samples, "Number of random functions")->check(CLI::PositiveNumber);
    exper->add_option("--Ns", exp_Ns, "Refinement levels, e.g. 2..9 or 4,6,9");
    exper->add_option("--seed", exp_seed, "Base seed");
    exper->add_option("--out", exp_out, "Report CSV (stdout when omitted)");
    exper->add_flag("--independent-coeffs", exp_independent,
                    "Circle: second component uses its own cosine coefficients");
    exper->add_option("--threads", exp_threads, "Worker threads")->check(CLI::PositiveNumber);
    exper->add_option("--reference-N", exp_reference, "Refinement whose simplex count is 100%");

    // aliasing
    auto* alias = app.add_subcommand("aliasing", "Compare original, linear and axis-wise subdivided models");
    std::string alias_a, alias_b, alias_eps = "1.125,0.5625,0.28125", alias_degrees = "1,0", alias_out;
    unsigned alias_prime = 11, alias_threads = 1;
    bool alias_unnormalized = false;
    alias->add_option("meshA", alias_a, "First VOFF")->required();
    alias->add_option("meshB", alias_b, "Second VOFF")->required();
    alias->add_option("--epsilons", alias_eps, "Tolerances");
    alias->add_option("--degrees", alias_degrees, "Homology degrees");
    alias->add_option("--prime", alias_prime, "Coefficient field Z_p");
    alias->add_option("--threads", alias_threads, "Worker threads")->check(CLI::PositiveNumber);
    alias->add_option("--out", alias_out, "Table CSV (stdout when omitted)");
    alias->add_flag("--allow-unnormalized", alias_unnormalized, "Accept inputs outside [0,1]");

    // convert
    auto* conv = app.add_subcommand("convert", "OFF surface to VOFF with measuring functions");
    std::string conv_in, conv_out, conv_measure = "principal";
    bool conv_normalize = false;
    conv->add_option("mesh", conv_in, "Input OFF")->required();
    conv->add_option("-o,--output", conv_out, "Output VOFF (stdout when omitted)");
    conv->add_option("--measure", conv_measure, "Measuring functions")->check(CLI::IsMember({"principal"}));
    conv->add_flag("--normalize", conv_normalize, "Rescale each component onto [0,1]");

    // normalize
    auto* norm = app.add_subcommand("normalize", "Rescale each component onto [0,1]");
    std::string norm_in, norm_out;
    norm->add_option("mesh", norm_in, "Input VOFF")->required();
    norm->add_option("-o,--output", norm_out, "Output VOFF (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sub) {
            auto mesh = axw::load_voff(sub_in, precision);
            auto mode = sub_mode == "linear" ? axw::Interpolant::linear : axw::Interpolant::axiswise;
            for (int i = 0; i < sub_repeat; ++i)
                mesh = axw::barycentric_subdivide(mesh, mode);
            write_mesh(sub_out, mesh);
        } else if (*rank) {
            auto mesh = axw::load_voff(rank_in, precision);
            std::cout << axw::discrete_rank_invariant(mesh, parse_reals(rank_alpha), parse_reals(rank_beta),
                                                      rank_degree, axw::FieldPrime(rank_prime))
                      << '\n';
        } else if (*lambda) {
            auto mesh = axw::load_voff(lambda_in, precision);
            for (std::size_t j = 0; j < mesh.components(); ++j)
                std::cout << (j ? "," : "") << "lambda_" << j + 1;
            std::cout << '\n';
            for (const auto& l : axw::lambda_set(mesh)) {
                for (std::size_t j = 0; j < l.size(); ++j)
                    std::cout << (j ? "," : "") << axw::format_number(l[j]);
                std::cout << '\n';
            }
        } else if (*diagram) {
            auto mesh = axw::load_voff(diagram_in, precision);
            auto ab = parse_reals(diagram_pair);
            if (ab.size() != 2)
                throw axw::ParseError("--pair expects a,b");
            auto degrees = parse_ints(diagram_degrees);
            int top = *std::max_element(degrees.begin(), degrees.end());
            auto g = axw::scalar_reduce(mesh, axw::AdmissiblePair::planar(ab[0], ab[1]));
            auto diagrams = axw::compute_diagrams(axw::build_scalar_filtration(mesh, g), top,
                                                  axw::FieldPrime(diagram_prime));
            std::cout << "degree,birth,death\n";
            for (int q : degrees) {
                if (q < 0)
                    throw axw::DomainError("negative homology degree");
                const auto& D = diagrams[static_cast<std::size_t>(q)];
                for (const auto& p : D.pairs)
                    std::cout << q << ',' << axw::format_number(p.birth) << ',' << axw::format_number(p.death)
                              << '\n';
                for (double e : D.essential)
                    std::cout << q << ',' << axw::format_number(e) << ",inf\n";
            }
        } else if (*dist) {
            auto a = axw::load_voff(dist_a, precision);
            auto b = axw::load_voff(dist_b, precision);
            axw::MatchOptions options;
            options.degrees = parse_ints(dist_degrees);
            options.field = axw::FieldPrime(dist_prime);
            options.threads = dist_threads;
            options.allow_unnormalized = dist_unnormalized;
            options.keep_trace = !dist_trace.empty();
            auto result = axw::approx_matching_distance(a, b, dist_eps, options);

            std::ostringstream summary;
            summary << "degree,dtilde,epsilon,argmax_a,argmax_b\n";
            for (const auto& d : result.per_degree)
                summary << d.degree << ',' << axw::format_number(d.value) << ',' << axw::format_number(dist_eps)
                        << ',' << axw::format_number(d.argmax_a) << ',' << axw::format_number(d.argmax_b) << '\n';
            summary << "max," << axw::format_number(result.value) << ',' << axw::format_number(dist_eps) << ','
                    << axw::format_number(result.argmax_a) << ',' << axw::format_number(result.argmax_b) << '\n';
            std::cout << summary.str();
            if (!result.certified)
                std::cerr << "warning: inputs are not normalized; the tolerance is not certified\n";
            if (!dist_output.empty())
                open_output(dist_output) << summary.str();
            if (!dist_trace.empty()) {
                auto out = open_output(dist_trace);
                out << "a,b,degree,d1,rescaled\n";
                for (const auto& r : result.trace)
                    out << axw::format_number(r.a) << ',' << axw::format_number(r.b) << ',' << r.degree << ','
                        << axw::format_number(r.distance_1d) << ',' << axw::format_number(r.rescaled) << '\n';
            }
        } else if (*exper) {
            axw::ExperimentOptions options;
            options.samples = exp_samples;
            options.seed = exp_seed;
            options.independent_coeffs = exp_independent;
            options.threads = exp_threads;
            options.reference_N = exp_reference;
            options.Ns = parse_range(exp_Ns.empty() ? (exp_kind == "circle" ? "2..9" : "4..9") : exp_Ns);
            auto report = exp_kind == "circle" ? axw::run_circle_experiment(options)
                                               : axw::run_torus_experiment(options);
            if (exp_out.empty()) {
                report.write_csv(std::cout);
            } else {
                auto out = open_output(exp_out);
                report.write_csv(out);
            }
        } else if (*alias) {
            auto a = axw::load_voff(alias_a, precision);
            auto b = axw::load_voff(alias_b, precision);
            axw::AliasingOptions options;
            options.epsilons = parse_reals(alias_eps);
            options.degrees = parse_ints(alias_degrees);
            options.field = axw::FieldPrime(alias_prime);
            options.threads = alias_threads;
            options.allow_unnormalized = alias_unnormalized;
            auto rows = axw::run_aliasing_protocol(a, b, options);
            if (alias_out.empty()) {
                axw::write_aliasing_csv(std::cout, rows);
            } else {
                auto out = open_output(alias_out);
                axw::write_aliasing_csv(out, rows);
            }
        } else if (*conv) {
            auto mesh = axw::principal_measure(axw::load_off(conv_in), precision);
            if (conv_normalize)
                mesh = mesh.with_function(axw::normalize(mesh.function()));
            write_mesh(conv_out, mesh);
        } else if (*norm) {
            auto mesh = axw::load_voff(norm_in, precision);
            write_mesh(norm_out, mesh.with_function(axw::normalize(mesh.function())));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
