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

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ceremony/kernel/error.hh"
#include "ceremony/kernel/parser.hh"
#include "ceremony/kernel/semantics.hh"
#include "ceremony/models/scenario.hh"
#include "fixtures.hh"
#include "oracle/naive_enumerator.hh"

namespace ceremony::kernel {
namespace {

using models::BuildScenario;
using models::ScenarioId;

std::shared_ptr<const ModelDef> Parse(std::string_view src) {
  return std::make_shared<const ModelDef>(ParseModel(src));
}

class BrowserStateTest : public ::testing::Test {
 protected:
  BrowserStateTest()
      : scenario_(BuildScenario(ScenarioId::Parse("firefox:classic"))),
        model_(*scenario_.model) {}

  GlobalState With(std::string_view stmts) const {
    return ExecStmts(model_, model_.initial_globals(),
                     ParseStmts(model_, stmts));
  }
  bool Macro(const GlobalState& s, std::string_view name) const {
    return EvalExpr(model_, s, model_.macro(name).body).boolean();
  }

  models::Scenario scenario_;
  const ModelDef& model_;
};

TEST_F(BrowserStateTest, AuthFailNeedsIntruderAndHonestUrl) {
  EXPECT_TRUE(Macro(With("intruder_server=true; typed_url=S"), "AuthFail"));
  EXPECT_FALSE(Macro(With("intruder_server=true; typed_url=I"), "AuthFail"));
  EXPECT_FALSE(Macro(With("typed_url=S"), "AuthFail"));
}

TEST_F(BrowserStateTest, IntruderSignatureIsNeverValid) {
  auto s = With("cert[0]=S; cert[1]=Pk; cert[2]=SignI; typed_url=S");
  EXPECT_FALSE(Macro(s, "CertificateIsValid"));
  auto ok = With(
      "cert[0]=S; cert[1]=Pk; cert[2]=SignCA; extendedcert[4]=noexpi; "
      "typed_url=S");
  EXPECT_TRUE(Macro(ok, "CertificateIsValid"));
}

TEST_F(BrowserStateTest, PreloadedListGivesHstsPolicy) {
  auto s = With("preloadedHSTSList.Add(S); typed_url=S");
  EXPECT_TRUE(Macro(s, "URLhasHSTSpolicy"));
  EXPECT_FALSE(Macro(With("typed_url=S"), "URLhasHSTSpolicy"));
}

TEST_F(BrowserStateTest, PreloadStatementsAddAndFlag) {
  auto s = With("preloadedHSTSList.Add(S); preload=true");
  auto list = *model_.FindSet("preloadedHSTSList");
  EXPECT_EQ(model_.SetContents(s, list), std::vector<Value>{Sym(Symbol::S)});
  EXPECT_TRUE(model_.ReadVar(s, *model_.FindVar("preload")).boolean());
}

TEST_F(BrowserStateTest, EmptyStatementListIsIdentity) {
  auto s = With("typed_url=I; user_warned=true");
  EXPECT_EQ(ExecStmts(model_, s, {}), s);
}

TEST_F(BrowserStateTest, AddIsIdempotent) {
  auto once = With("dynamicHSTSList.Add(S)");
  auto twice = ExecStmts(model_, once, ParseStmts(model_, "dynamicHSTSList.Add(S)"));
  EXPECT_EQ(once, twice);
}

TEST_F(BrowserStateTest, EvaluationErrors) {
  auto check = [&](std::string_view text, ErrorCode code) {
    try {
      EvalExpr(model_, model_.initial_globals(), ParseExpr(model_, text));
      ADD_FAILURE() << text << " evaluated";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code) << text << ": " << e.what();
    }
  };
  check("cert[3] == S", ErrorCode::kIndexOutOfRange);
  check("typed_url && finishTLS", ErrorCode::kTypeMismatch);
  EXPECT_THROW(ParseExpr(model_, "nonsense == S"), Error);
}

TEST_F(BrowserStateTest, AddOutsideUniverseFails) {
  try {
    With("dynamicHSTSList.Add(Pk)");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutsideUniverse);
  }
}

TEST(SuccessorsTest, StopHasNone) {
  auto m = Parse("Model = Stop;");
  EXPECT_TRUE(Successors(*m, InitialConfig(*m)).empty());
}

TEST(SuccessorsTest, OutputMeetsInput) {
  const auto& fixtures = testing::Fixtures();
  auto it = std::find_if(fixtures.begin(), fixtures.end(),
                         [](const auto& f) { return f.name == "rendezvous"; });
  auto m = Parse(it->source);
  auto next = Successors(*m, InitialConfig(*m));
  ASSERT_EQ(next.size(), 1u);
  EXPECT_EQ(next[0].label.Format(*m), "ui.S");
  EXPECT_EQ(m->ReadVar(next[0].target.globals, *m->FindVar("typed_url")),
            Sym(Symbol::S));
  // Both sides continue: the sender with `done`, the receiver with `got`.
  std::vector<std::string> labels;
  for (const auto& t : Successors(*m, next[0].target)) {
    labels.push_back(t.label.Format(*m));
  }
  std::sort(labels.begin(), labels.end());
  EXPECT_EQ(labels, (std::vector<std::string>{"done", "got"}));
}

TEST(SuccessorsTest, ElselessConditionalFallsThrough) {
  auto m = Parse("var f = false;\nModel = ifa (f) { x -> Skip }; y -> Stop;");
  auto first = Successors(*m, InitialConfig(*m));
  ASSERT_EQ(first.size(), 1u);
  EXPECT_EQ(first[0].label.kind(), EventLabel::Kind::kTau);
  bool saw_y = false;
  std::vector<Config> frontier{first[0].target};
  for (int depth = 0; depth < 3 && !saw_y; ++depth) {
    std::vector<Config> next;
    for (const auto& c : frontier) {
      for (const auto& t : Successors(*m, c)) {
        saw_y |= t.label.Format(*m) == "y";
        EXPECT_NE(t.label.Format(*m), "x");
        next.push_back(t.target);
      }
    }
    frontier = std::move(next);
  }
  EXPECT_TRUE(saw_y);
}

TEST(SuccessorsTest, UnguardedRecursionIsReported) {
  auto m = Parse("Model = Loop();\nLoop() = Loop();");
  try {
    Successors(*m, InitialConfig(*m));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnguardedRecursion);
  }
}

TEST(SuccessorsTest, OperaMiniInitialStepsMatchOracle) {
  auto sc = BuildScenario(ScenarioId::Parse("opera-mini"));
  const auto& m = *sc.model;
  auto steps = Successors(m, InitialConfig(m));
  std::vector<std::string> got, want = oracle::InitialLabels(m);
  for (const auto& t : steps) got.push_back(t.label.Format(m));
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
  // The preloading branch is one of them.
  EXPECT_TRUE(std::any_of(steps.begin(), steps.end(), [&](const auto& t) {
    return t.label.Format(m) == "PreloadHSTSpolicy";
  }));
}

TEST(ParserTest, ReportsLocatedErrors) {
  struct Case {
    std::string_view src;
    ErrorCode code;
  };
  const Case cases[] = {
      {"Model = a -> ;", ErrorCode::kParse},
      {"Model = Missing();", ErrorCode::kUndeclaredName},
      {"var x = false;\nvar x = true;\nModel = Stop;",
       ErrorCode::kDuplicateDeclaration},
      {"Model = ui!S -> Stop;", ErrorCode::kUndeclaredName},
  };
  for (const auto& c : cases) {
    try {
      ParseModel(c.src);
      ADD_FAILURE() << c.src;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), c.code) << c.src << ": " << e.what();
    }
  }
}

TEST(ParserTest, EveryScenarioParses) {
  for (const auto& id : ScenarioId::All()) {
    EXPECT_NO_THROW(BuildScenario(id)) << id.str();
  }
}

TEST(ParserTest, FixturesParse) {
  for (const auto& f : testing::Fixtures()) {
    EXPECT_NO_THROW(ParseModel(f.source)) << f.name;
  }
}

TEST(ValueTest, EncodeRoundTrips) {
  for (const Value& v : {Sym(Symbol::SignCA), Value::Bool(true),
                         Value::Int(0), Value::Int(Value::kMaxInt)}) {
    EXPECT_EQ(Value::Decode(v.Encode()), v) << v;
  }
}

}  // namespace
}  // namespace ceremony::kernel
