#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "unimorph/exporters.hpp"
#include "unimorph/generate.hpp"
#include "unimorph/io.hpp"
#include "unimorph/pseudomorph.hpp"
#include "unimorph/reinsert.hpp"
#include "unimorph/verify.hpp"

namespace {

using namespace unimorph;

constexpr int kOk = 0;
constexpr int kParse = 1;
constexpr int kBuild = 2;
constexpr int kVerifyFail = 3;

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

std::string directionText(const DirectionResult& r) {
  if (const Direction* d = std::get_if<Direction>(&r))
    return "(" + ratToString(d->dir.dx) + ", " + ratToString(d->dir.dy) + ")";
  if (std::holds_alternative<AnyDirection>(r)) return "none (nothing moved)";
  const NotUnidirectional& nu = std::get<NotUnidirectional>(r);
  return "mixed: vertices " + std::to_string(nu.u) + " and " +
         std::to_string(nu.v) + " move in different directions";
}

int cmdGen(VertexId n, std::uint64_t seed, const std::string& out,
           bool preview) {
  DrawingPair pr = generatePair(n, seed);
  if (!writeFile(out, serializePair(pr, preview))) return kBuild;
  std::cout << "wrote " << out << ": " << n << " vertices, "
            << pr.first.tri.edgeCount() << " edges, seed " << seed << "\n";
  return kOk;
}

int cmdMorph(const std::string& in, const std::string& out, bool audit,
             std::size_t maxRetries, bool preview) {
  DrawingPair pr = parsePair(readFile(in));
  if (audit) {
    for (const Drawing* d : {&pr.first, &pr.second}) {
      auto errs = validateDrawing(*d, true);
      if (!errs.empty()) {
        std::cerr << "build failed: input drawing invalid: " << errs.front()
                  << "\n";
        return kBuild;
      }
    }
  }
  Morph m;
  StepCount counts;
  try {
    PseudoMorph pm = buildPseudoMorph(pr.first, pr.second);
    counts = countSteps(pm);
    ConvertOptions opts;
    opts.maxRetries = maxRetries;
    m = convert(pm, pr.first, opts);
  } catch (const Error& e) {
    std::cerr << "build failed: " << e.what() << "\n";
    return kBuild;
  }

  // Never trust the builder: re-certify the finished morph before writing.
  try {
    MorphReport rep = verifyMorph(m);
    if (!rep.certified) {
      std::cerr << "internal error: built morph failed certification: "
                << rep.reasons.front() << "\n";
      return kVerifyFail;
    }
  } catch (const Error& e) {
    std::cerr << "internal error: built morph failed certification: "
              << e.what() << "\n";
    return kVerifyFail;
  }
  if (m.keyframes.back() != pr.second.coords) {
    std::cerr << "internal error: morph does not land on the target drawing\n";
    return kVerifyFail;
  }

  if (!writeFile(out, serializeMorph(m, preview))) return kBuild;
  std::cout << "wrote " << out << ": " << m.steps() << " steps ("
            << counts.linear << " linear, " << counts.contractions
            << " placements, " << counts.uncontractions << " returns)\n";
  return kOk;
}

int cmdVerify(const std::string& in, std::size_t oracleSamples, bool audit) {
  Morph m = parseMorph(readFile(in));
  MorphReport rep;
  try {
    rep = verifyMorph(m);
  } catch (const Error& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerifyFail;
  }

  std::cout << "keyframes: " << m.keyframes.size() << "\n";
  std::cout << "steps: " << m.steps() << "\n";
  for (std::size_t i = 0; i < rep.steps.size(); ++i) {
    const StepReport& sr = rep.steps[i];
    std::cout << "  step " << i << ": direction "
              << directionText(sr.direction);
    if (i < m.notes.size()) std::cout << "  [" << m.notes[i] << "]";
    std::cout << (sr.certified ? "" : "  NOT CERTIFIED") << "\n";
    for (const std::string& r : sr.reasons) std::cout << "    " << r << "\n";
  }

  if (audit) {
    for (std::size_t i = 0; i < m.keyframes.size(); ++i) {
      auto errs = validateDrawing({m.tri, m.keyframes[i]}, true);
      if (!errs.empty()) {
        std::cerr << "keyframe " << i << " fails the audit: " << errs.front()
                  << "\n";
        return kVerifyFail;
      }
    }
  }

  if (oracleSamples > 0) {
    for (std::size_t i = 0; i + 1 < m.keyframes.size(); ++i) {
      auto violation = sampleOracle(Drawing{m.tri, m.keyframes[i]},
                                    Drawing{m.tri, m.keyframes[i + 1]},
                                    oracleSamples);
      if (violation && i < rep.steps.size() && rep.steps[i].certified) {
        std::cerr << "fatal internal error: sampling found a violation that "
                     "certification missed at step "
                  << i << ", t=" << ratToString(violation->time) << ": "
                  << violation->what << "\n";
        return kVerifyFail;
      }
    }
    std::cout << "oracle: " << oracleSamples
              << " samples per step agree with certification\n";
  }

  if (!rep.certified) {
    std::cerr << "not certified: " << rep.reasons.front() << "\n";
    return kVerifyFail;
  }
  std::cout << "certified: every step planar and unidirectional\n";
  return kOk;
}

int cmdExport(const std::string& in, const std::string& out,
              const std::string& format, double secondsPerStep) {
  Morph m = parseMorph(readFile(in));
  std::string text =
      format == "svg" ? exportSvg(m, secondsPerStep) : exportCsv(m);
  if (!writeFile(out, text)) return kBuild;
  std::cout << "wrote " << out << " (" << format << ", " << m.steps()
            << " steps)\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planarity-preserving morphs between straight-line drawings "
               "of a triangulation"};
  app.require_subcommand(1);

  VertexId genN = 12;
  std::uint64_t genSeed = 1;
  std::string genOut;
  bool genPreview = false;
  CLI::App* gen = app.add_subcommand("gen", "generate a random drawing pair");
  gen->add_option("-n,--vertices", genN, "vertex count")
      ->check(CLI::Range(3u, 1000000u));
  gen->add_option("--seed", genSeed, "generator seed");
  gen->add_option("-o,--output", genOut, "pair file to write")->required();
  gen->add_flag("--preview", genPreview, "embed float previews");

  std::string morphIn, morphOut;
  bool morphAudit = false, morphPreview = false;
  std::size_t morphRetries = 64;
  CLI::App* morph = app.add_subcommand(
      "morph", "build a certified morph between the two drawings of a pair");
  morph->add_option("input", morphIn, "drawing-pair file")->required();
  morph->add_option("-o,--output", morphOut, "morph file to write")
      ->required();
  morph->add_flag("--audit", morphAudit,
                  "run the quadratic segment checks on the inputs");
  morph->add_option("--max-retries", morphRetries,
                    "retry budget for the safety-margin search");
  morph->add_flag("--preview", morphPreview, "embed float previews");

  std::string verifyIn;
  std::size_t verifySamples = 0;
  bool verifyAudit = false;
  CLI::App* verify =
      app.add_subcommand("verify", "certify every step of a morph file");
  verify->add_option("input", verifyIn, "morph file")->required();
  verify->add_option("--oracle-samples", verifySamples,
                     "cross-check each step at this many sample times");
  verify->add_flag("--audit", verifyAudit,
                   "run the quadratic segment checks on every keyframe");

  std::string exportIn, exportOut, exportFormat = "svg";
  double exportSeconds = 1.2;
  CLI::App* exp =
      app.add_subcommand("export", "render a morph as an animation or table");
  exp->add_option("input", exportIn, "morph file")->required();
  exp->add_option("-o,--output", exportOut, "file to write")->required();
  exp->add_option("--format", exportFormat, "svg or csv")
      ->check(CLI::IsMember({"svg", "csv"}));
  exp->add_option("--seconds-per-step", exportSeconds,
                  "animation pace for svg")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  try {
    if (gen->parsed()) return cmdGen(genN, genSeed, genOut, genPreview);
    if (morph->parsed())
      return cmdMorph(morphIn, morphOut, morphAudit, morphRetries,
                      morphPreview);
    if (verify->parsed())
      return cmdVerify(verifyIn, verifySamples, verifyAudit);
    if (exp->parsed())
      return cmdExport(exportIn, exportOut, exportFormat, exportSeconds);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ParseError ? kParse : kBuild;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kBuild;
  }
  return kOk;
}
