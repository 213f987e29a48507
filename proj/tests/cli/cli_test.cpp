// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "neuronscope/dump_format.hpp"
#include "neuronscope/io.hpp"
#include "neuronscope/serialization.hpp"

using namespace neuronscope;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    PlantSpec spec;
    spec.schema = ComponentSchema({fixtures::small_decoder(3, 6, 10)});
    spec.languages = {"de", "fr"};
    spec.examples_per_cell = 12;
    for (std::size_t i = 0; i < 3; ++i) {
      PlantedNeuron p;
      p.neuron = {ModuleName::text_decoder, 2, "cross_attn.k_proj", i};
      p.target.modality = Modality::speech;
      p.positive_mean = 10.0;
      p.negative_mean = 0.0;
      p.stddev = 0.5;
      spec.planted.push_back(p);
    }
    planted_ = spec.planted;
    save_json(dir_ / "spec.json", to_json(spec));
    ASSERT_EQ(run({"synth", "-i", path("spec.json"), "-o", path("d.nact")}).status, 0);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fixtures::TempDir dir_;
  std::vector<PlantedNeuron> planted_;
};

}  // namespace

TEST_F(CliTest, ValidateSummarizesDump) {
  const auto r = run({"validate", "-i", path("d.nact")});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = parse_json(r.out);
  EXPECT_EQ(j.at("status"), "ok");
  EXPECT_EQ(j.at("rows"), 48);
  EXPECT_EQ(j.at("languages").at("de"), 24);
}

TEST_F(CliTest, RankPutsPlantedNeuronsAtApOne) {
  const auto r = run({"rank", "-i", path("d.nact"), "--setting", "modality", "--modality",
                      "speech", "-o", path("ap.json")});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto table = ap_table_from_json(load_json(path("ap.json")));
  for (const auto& p : planted_) {
    EXPECT_EQ(table.scores[table.scope.local_column(p.neuron)], 1.0);
  }

  ASSERT_EQ(run({"select", "-i", path("ap.json"), "--k", "3", "--polarity", "top", "-o",
                 path("sel.json")})
                .status,
            0);
  const auto sels = selections_from_json(load_json(path("sel.json")));
  ASSERT_EQ(sels.size(), 1u);
  for (const auto& p : planted_) {
    EXPECT_NE(std::find(sels[0].neurons.begin(), sels[0].neurons.end(), p.neuron),
              sels[0].neurons.end());
  }
}

TEST_F(CliTest, BinaryApTableRoundTrips) {
  ASSERT_EQ(run({"rank", "-i", path("d.nact"), "--setting", "multimodal", "--language", "de",
                 "-o", path("ap.napt")})
                .status,
            0);
  const auto r = run({"select", "-i", path("ap.napt"), "--k", "2,4"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(selections_from_json(parse_json(r.out)).size(), 4u);
}

TEST_F(CliTest, ScoreIdenticalFilesGivesHundred) {
  write_text_atomic(dir_ / "ref.txt", "the cat sat on the mat\nhello, world.\n");
  const auto r = run({"score", "--reference", path("ref.txt"), "--hypothesis", path("ref.txt"),
                      "--language", "en"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = parse_json(r.out);
  EXPECT_EQ(j.at("segments"), 2);
  EXPECT_EQ(j.at("metrics").at(3).at("name"), "combined");
  EXPECT_DOUBLE_EQ(j.at("metrics").at(3).at("value").get<double>(), 100.0);
  EXPECT_EQ(j.at("metrics").at(0).at("value"), 0.0);
}

TEST_F(CliTest, BaselinePlanIsByteIdenticalAcrossRuns) {
  for (const char* name : {"b1.json", "b2.json"}) {
    const auto r = run({"plan", "-i", path("d.nact"), "--baseline", "--k", "10", "--seed", "1234",
                        "-o", path(name)});
    ASSERT_EQ(r.status, 0) << r.err;
  }
  EXPECT_EQ(read_text_file(dir_ / "b1.json"), read_text_file(dir_ / "b2.json"));
  const auto plan = plan_from_json(load_json(path("b1.json")));
  EXPECT_EQ(plan.entries.size(), 20u);  // both tails by default
  EXPECT_EQ(plan.seed, std::optional<std::uint64_t>(1234));
}

TEST_F(CliTest, PlanThenApplyOverwritesTargets) {
  ASSERT_EQ(run({"rank", "-i", path("d.nact"), "--setting", "modality", "--modality", "speech",
                 "-o", path("ap.json")})
                .status,
            0);
  ASSERT_EQ(run({"select", "-i", path("ap.json"), "--k", "3", "-o", path("sel.json")}).status, 0);
  const auto p = run({"plan", "-i", path("d.nact"), "--selections", path("sel.json"), "-o",
                      path("plan.json")});
  ASSERT_EQ(p.status, 0) << p.err;
  EXPECT_EQ(parse_json(p.out).at("neurons"), 6);

  const auto a = run({"apply", "-i", path("d.nact"), "--plan", path("plan.json"), "-o",
                      path("d2.nact")});
  ASSERT_EQ(a.status, 0) << a.err;
  const auto before = load_dataset(path("d.nact"));
  const auto after = load_dataset(path("d2.nact"));
  const auto plan = plan_from_json(load_json(path("plan.json")));
  for (const auto& e : plan.entries) {
    const auto c = before.schema().column_of(e.neuron);
    for (std::size_t r = 0; r < after.rows(); ++r) {
      EXPECT_EQ(after.at(r, c), static_cast<float>(e.replacement));
    }
  }
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
  ASSERT_EQ(run({"rank", "-i", path("d.nact"), "--setting", "modality", "--modality", "speech",
                 "-o", path("ap.json")})
                .status,
            0);
  save_json(dir_ / "cfg.json", Json{{"k", {5}}, {"polarity", "top"}, {"abs", true}});

  auto r = run({"select", "-i", path("ap.json"), "--config", path("cfg.json")});
  ASSERT_EQ(r.status, 0) << r.err;
  auto sels = selections_from_json(parse_json(r.out));
  ASSERT_EQ(sels.size(), 1u);
  EXPECT_EQ(sels[0].k, 5u);

  r = run({"select", "-i", path("ap.json"), "--config", path("cfg.json"), "--k", "2"});
  sels = selections_from_json(parse_json(r.out));
  ASSERT_EQ(sels.size(), 1u);
  EXPECT_EQ(sels[0].k, 2u);
  EXPECT_EQ(sels[0].polarity, Polarity::top);

  save_json(dir_ / "bad.json", Json{{"colour", "red"}});
  r = run({"select", "-i", path("ap.json"), "--config", path("bad.json")});
  EXPECT_EQ(r.status, 2);
}

TEST_F(CliTest, ErrorsAreStructuredWithExitCodes) {
  auto r = run({"rank", "-i", path("d.nact"), "--bogus"});
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(parse_json(r.err).at("error").at("kind"), "usage");

  r = run({"rank", "-i", path("d.nact"), "--setting", "modality", "--modality", "speech",
           "--module", "speech_encoder"});
  EXPECT_EQ(r.status, 2);

  r = run({"rank", "-i", path("missing.nact"), "--setting", "modality", "--modality", "speech"});
  EXPECT_EQ(r.status, 3);

  std::string bytes = read_text_file(dir_ / "d.nact");
  bytes[bytes.size() - 10] ^= 0x40;
  write_text_atomic(dir_ / "bad.nact", bytes);
  r = run({"validate", "-i", path("bad.nact")});
  EXPECT_EQ(r.status, 3);
  const auto err = parse_json(r.err);
  EXPECT_EQ(err.at("error").at("kind"), "data");
  EXPECT_EQ(err.at("error").at("message"), "checksum mismatch");

  r = run({"rank", "-i", path("d.nact"), "--setting", "multimodal", "--language", "ja"});
  EXPECT_EQ(r.status, 3);
  EXPECT_EQ(parse_json(r.err).at("error").at("message"), "degenerate labels");

  EXPECT_EQ(run({}).status, 2);
  EXPECT_EQ(run({"--help"}).status, 0);
}

TEST_F(CliTest, ReportIsReproducibleExceptSidecar) {
  for (const char* name : {"r1", "r2"}) {
    const auto r = run({"report", "-i", path("d.nact"), "-o", path(name), "--k", "3,6", "--svg"});
    ASSERT_EQ(r.status, 0) << r.err;
  }
  const auto index = load_json(path("r1/report.json"));
  ASSERT_GT(index.at("artifacts").size(), 10u);
  for (const auto& rel : index.at("artifacts")) {
    const auto name = rel.get<std::string>();
    EXPECT_EQ(read_text_file(dir_ / ("r1/" + name)), read_text_file(dir_ / ("r2/" + name)))
        << name;
  }
  EXPECT_EQ(read_text_file(dir_ / "r1/report.json"), read_text_file(dir_ / "r2/report.json"));
  EXPECT_TRUE(load_json(path("r1/run_info.json")).contains("created"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "r1/experiment3/text_decoder/magnitude.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "r1/experiment2/text_decoder/baseline_k3.json"));
}

TEST_F(CliTest, HistogramCsvAndSvg) {
  ASSERT_EQ(run({"rank", "-i", path("d.nact"), "--setting", "modality", "--modality", "speech",
                 "-o", path("ap.json")})
                .status,
            0);
  ASSERT_EQ(run({"select", "-i", path("ap.json"), "--k", "3", "-o", path("sel.json")}).status, 0);
  auto r = run({"histogram", "-i", path("sel.json"), "-o", path("h.csv")});
  EXPECT_EQ(r.status, 2);  // two selections do not fit one CSV
  r = run({"histogram", "-i", path("sel.json"), "--polarity", "top", "-o", path("h.csv"),
           "--svg"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto csv = read_text_file(dir_ / "h.csv");
  EXPECT_NE(csv.find("2,cross_attn.k_proj,attn,3\n"), std::string::npos);
  const auto svg = read_text_file(dir_ / "h.modality_speech_top_3.attn.svg");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
}
