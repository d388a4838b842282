#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weyl/cli.hpp"

namespace {

weyl::cplx parse_point(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    weyl::fail(weyl::ErrorCode::ValidationError, "--at expects re or re,im, got '" + text + "'");
  }
}

const std::map<std::string, std::string> kHelp{
    {"eval", "B and the Weyl function M at points; Jacobi: Nevanlinna matrix entries"},
    {"phase", "phase and its first three derivatives on the real line"},
    {"curvature", "curvature omega and phase density chi"},
    {"spectrum", "spectrum of the extension for --bc in --window"},
    {"growth", "height, T_F, counting and proximity functions on an r grid"},
    {"defect", "defect estimate m/h for --bc"},
    {"kernels", "Gram matrices of the five kernels and their PSD check"},
    {"sample", "reconstruction from samples on the self-adjoint spectrum"},
    {"completeness", "mean type estimate and completeness verdict"},
    {"riesz", "Riesz basis diagnostic for the zero set"},
    {"moment-matrix", "Nevanlinna matrix entries of a Jacobi spec"},
    {"moment-spectrum", "von Neumann spectrum and masses for parameter --bc"},
    {"moment-growth", "characteristic functions of the Nevanlinna entries"},
    {"verify", "check the identities that apply to the spec"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weyl-lab: characteristic functions, curvature, value distribution and moment problems"};
  app.require_subcommand(1, 1);

  std::string spec_path, bc, out, format = "csv";
  double rmax = 0.0;
  std::vector<double> window;
  std::vector<std::string> at;
  for (const std::string& name : weyl::command_names()) {
    CLI::App* sub = app.add_subcommand(name, kHelp.at(name));
    sub->add_option("--spec", spec_path, "operator spec (JSON)")->required();
    sub->add_option("--bc", bc, "boundary condition re,im | re | inf (Jacobi: the real parameter t)");
    sub->add_option("--rmax", rmax, "largest radius of the r grid");
    sub->add_option("--window", window, "real window a b")->expected(2);
    sub->add_option("--at", at, "evaluation point re or re,im (repeatable)");
    sub->add_option("--out", out, "output file (default stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    weyl::RunParams params;
    if (sub->count("--bc")) params.bc = bc;
    if (sub->count("--rmax")) params.rmax = rmax;
    if (window.size() == 2) {
      if (!(window[0] < window[1])) weyl::fail(weyl::ErrorCode::ValidationError, "--window needs a < b");
      params.window = std::make_pair(window[0], window[1]);
    }
    for (const std::string& p : at) params.at.push_back(parse_point(p));
    const weyl::OperatorSpecFile spec = weyl::parse_spec(spec_path);
    const weyl::Report report = weyl::run(command, spec, params);
    weyl::emit(report, weyl::parse_format(format), out);
    if (report.verification_failed) {
      std::cerr << "weyl-lab " << command << ": verification failed\n";
      return weyl::exit_code(weyl::ErrorCode::VerificationFailure);
    }
  } catch (const weyl::Error& e) {
    std::cerr << "weyl-lab " << command << ": " << e.what() << "\n";
    return weyl::exit_code(e.code());
  }
  return 0;
}
