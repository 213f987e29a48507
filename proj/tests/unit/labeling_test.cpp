// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "neuronscope/error.hpp"
#include "neuronscope/labeling.hpp"

using namespace neuronscope;

namespace {

std::vector<ExampleMeta> grid() {
  return {fixtures::example("de", Modality::speech), fixtures::example("de", Modality::text),
          fixtures::example("fr", Modality::speech), fixtures::example("fr", Modality::text),
          fixtures::example("es", Modality::speech), fixtures::example("es", Modality::text)};
}

TargetSpec target(Setting setting, std::optional<std::string> lang,
                  std::optional<Modality> mod = std::nullopt,
                  std::optional<Modality> restricted = std::nullopt) {
  TargetSpec t;
  t.setting = setting;
  t.language = std::move(lang);
  t.modality = mod;
  t.restricted_modality = restricted;
  return t;
}

}  // namespace

TEST(Labeling, UnimodalKeepsOnlyTheRestrictedModality) {
  const auto examples = grid();
  const auto labels = build_labels(
      examples, target(Setting::unimodal_language, "de", std::nullopt, Modality::text),
      ModuleName::text_encoder);
  EXPECT_EQ(labels.indices, (std::vector<std::size_t>{1, 3, 5}));
  EXPECT_EQ(labels.labels, (std::vector<std::uint8_t>{1, 0, 0}));
  EXPECT_EQ(labels.positives, 1u);
}

TEST(Labeling, MultimodalPoolsModalities) {
  const auto examples = grid();
  const auto labels = build_labels(examples, target(Setting::multimodal_language, "fr"),
                                   ModuleName::text_decoder);
  EXPECT_EQ(labels.size(), 6u);
  EXPECT_EQ(labels.labels, (std::vector<std::uint8_t>{0, 0, 1, 1, 0, 0}));
}

TEST(Labeling, ModalityAndLanguageModality) {
  const auto examples = grid();
  const auto mod = build_labels(examples, target(Setting::modality, std::nullopt, Modality::speech),
                                ModuleName::text_decoder);
  EXPECT_EQ(mod.labels, (std::vector<std::uint8_t>{1, 0, 1, 0, 1, 0}));

  const auto pair = build_labels(
      examples, target(Setting::language_modality, "es", Modality::speech),
      ModuleName::text_decoder);
  EXPECT_EQ(pair.labels, (std::vector<std::uint8_t>{0, 0, 0, 0, 1, 0}));
  EXPECT_EQ(pair.positives, 1u);
}

TEST(Labeling, EncoderScopeRejectsSharedSettings) {
  const auto examples = grid();
  for (auto scope : {ModuleName::speech_encoder, ModuleName::text_encoder}) {
    try {
      build_labels(examples, target(Setting::modality, std::nullopt, Modality::speech), scope);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::usage);
      EXPECT_STREQ(e.what(), "setting requires shared decoder");
    }
    EXPECT_THROW(build_labels(examples, target(Setting::multimodal_language, "de"), scope),
                 Error);
  }
}

TEST(Labeling, DegenerateLabels) {
  const auto examples = grid();
  try {
    build_labels(examples, target(Setting::multimodal_language, "ja"), ModuleName::text_decoder);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::data);
    EXPECT_STREQ(e.what(), "degenerate labels");
  }
  const std::vector<ExampleMeta> only_de = {fixtures::example("de", Modality::text)};
  EXPECT_THROW(build_labels(only_de,
                            target(Setting::unimodal_language, "de", std::nullopt, Modality::text),
                            ModuleName::text_encoder),
               Error);
}

TEST(Labeling, ValidateRequiresTheRightFields) {
  EXPECT_THROW(target(Setting::unimodal_language, "de").validate(), Error);
  EXPECT_THROW(target(Setting::multimodal_language, std::nullopt).validate(), Error);
  EXPECT_THROW(target(Setting::modality, "de", Modality::text).validate(), Error);
  EXPECT_THROW(target(Setting::language_modality, "de").validate(), Error);
  EXPECT_NO_THROW(target(Setting::language_modality, "de", Modality::text).validate());
}

TEST(Labeling, NamesAreStable) {
  EXPECT_EQ(target(Setting::unimodal_language, "de", std::nullopt, Modality::text).name(),
            "unimodal_language:de@text");
  EXPECT_EQ(target(Setting::multimodal_language, "de").name(), "multimodal_language:de");
  EXPECT_EQ(target(Setting::modality, std::nullopt, Modality::speech).name(), "modality:speech");
  EXPECT_EQ(target(Setting::language_modality, "fr", Modality::speech).name(),
            "language_modality:fr+speech");
  EXPECT_EQ(parse_setting("multimodal"), Setting::multimodal_language);
  EXPECT_THROW(parse_setting("bogus"), Error);
}
