/*
 * Copyright (c) 2026, The Ceremony Checker Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <set>
#include <string>

#include <gtest/gtest.h>

#include "ceremony/kernel/error.hh"
#include "ceremony/models/scenario.hh"
#include "ceremony/statespace/state_space.hh"

namespace ceremony::models {
namespace {

TEST(ScenarioIdTest, RoundTripsAllRows) {
  ASSERT_EQ(ScenarioId::All().size(), 12u);
  for (const auto& id : ScenarioId::All()) {
    EXPECT_EQ(ScenarioId::Parse(id.str()), id);
  }
  EXPECT_EQ(ScenarioId::Parse("seb").str(), "seb");
  EXPECT_EQ(ScenarioId::Parse("safari:private").mode(), Mode::kPrivate);
}

TEST(ScenarioIdTest, RejectsUnknownRows) {
  for (const char* bad : {"seb:private", "opera-mini:interleaved", "netscape",
                          "firefox:", ""}) {
    try {
      ScenarioId::Parse(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidScenario) << bad;
    }
  }
}

TEST(PropertyTest, NamesAndNumbers) {
  EXPECT_EQ(ParseProperty("warning-users"), 1);
  EXPECT_EQ(ParseProperty("P5"), 5);
  EXPECT_EQ(ParseProperty("3"), 3);
  EXPECT_EQ(PropertyName(4), "hsts-bootstrap");
  EXPECT_THROW(ParseProperty("P6"), Error);
}

TEST(ExpectedTest, TableSpotChecks) {
  auto at = [](const char* id, int p) {
    return ExpectedVerdict(ScenarioId::Parse(id), p);
  };
  EXPECT_EQ(at("firefox:classic", 3), Expected::kHolds);
  EXPECT_EQ(at("safari:private", 4), Expected::kViolated);
  EXPECT_EQ(at("seb", 4), Expected::kNotApplicable);
  EXPECT_EQ(at("seb", 5), Expected::kHolds);
  EXPECT_EQ(at("opera-mini", 1), Expected::kViolated);
}

TEST(ExpectedTest, ApplicabilityMatchesTable) {
  int cells = 0;
  for (const auto& id : ScenarioId::All()) {
    auto sc = BuildScenario(id);
    for (int p = 1; p <= kPropertyCount; ++p) {
      bool na = ExpectedVerdict(id, p) == Expected::kNotApplicable;
      EXPECT_EQ(sc.Applies(p), !na) << id.str() << " P" << p;
      cells += !na;
    }
  }
  EXPECT_EQ(cells, 57);
}

TEST(ExpectedTest, NoExpiryCellsAreHolds) {
  const auto& cells = NoExpiryScenarios();
  EXPECT_EQ(cells.size(), 4u);
  for (const auto& [id, p] : cells) {
    EXPECT_EQ(ExpectedVerdict(id, p), Expected::kHolds) << id.str() << p;
  }
  EXPECT_TRUE(cells.count({ScenarioId::Parse("firefox:classic"), 4}));
}

TEST(ScenarioTest, NoExpiryDropsExpiredCertificates) {
  auto id = ScenarioId::Parse("firefox:classic");
  ScenarioOptions nx;
  nx.assume_no_expiry = true;
  EXPECT_NE(ScenarioSource(id).find("expi"), std::string::npos);
  EXPECT_NE(ScenarioSource(id, nx), ScenarioSource(id));
}

TEST(ScenarioTest, SebNeverWarns) {
  auto sc = BuildScenario(ScenarioId::Parse("seb"));
  EXPECT_FALSE(sc.model->FindEvent("DisplayWarning").has_value());
  auto ff = BuildScenario(ScenarioId::Parse("firefox:classic"));
  EXPECT_TRUE(ff.model->FindEvent("DisplayWarning").has_value());
}

TEST(ScenarioTest, SafariTrustsStoredOrRevocationFreeCertificates) {
  std::string src = ScenarioSource(ScenarioId::Parse("safari:classic"));
  EXPECT_NE(src.find("if (CertificateIsValidNR || CertificateIsStored)"),
            std::string::npos);
}

TEST(ScenarioTest, OperaMiniOnlyShowsPages) {
  auto sc = BuildScenario(ScenarioId::Parse("opera-mini"));
  auto ts = statespace::Explore(sc.model);
  std::set<std::string> ui;
  for (statespace::StateId s = 0; s < ts.size(); ++s) {
    for (const auto& e : ts.edges(s)) {
      std::string l = ts.space().FormatLabel(e.label);
      if (l.rfind("ui.", 0) == 0) ui.insert(l);
    }
  }
  EXPECT_EQ(ui, (std::set<std::string>{"ui.Data", "ui.I", "ui.S", "ui.Webpage"}));
}

TEST(ScenarioTest, RolesFollowDefinitions) {
  auto sc = BuildScenario(ScenarioId::Parse("firefox:interleaved"));
  const auto& m = *sc.model;
  EXPECT_EQ(sc.RoleOf(*m.FindDefinition("ServerI")), Role::kIntruder);
  EXPECT_EQ(sc.RoleOf(*m.FindDefinition("ServerH")), Role::kHonestServer);
  EXPECT_EQ(sc.RoleOf(*m.FindDefinition("User")), Role::kUser);
  EXPECT_EQ(sc.RoleOf(*m.FindDefinition("Browser")), Role::kBrowser);
  EXPECT_EQ(sc.RoleOf(*m.FindDefinition("Model")), Role::kSystem);
  EXPECT_EQ(RoleName(Role::kHonestServer), "Honest Server");
}

TEST(ScenarioTest, SharedPartsAreCommon) {
  for (const auto& id : ScenarioId::All()) {
    auto sc = BuildScenario(id);
    for (const char* def : {"User", "ServerI", "ServerH", "Intruder", "Model"}) {
      EXPECT_TRUE(sc.model->FindDefinition(def).has_value()) << id.str() << def;
    }
    for (const char* macro : {"UserwantS", "AuthFail", "CompleteTLS",
                              "CertificateIsValid", "CertificateIsStored"}) {
      EXPECT_TRUE(sc.model->FindMacro(macro).has_value()) << id.str() << macro;
    }
  }
}

}  // namespace
}  // namespace ceremony::models
