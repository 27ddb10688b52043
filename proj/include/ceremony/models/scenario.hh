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

#ifndef CEREMONY_MODELS_SCENARIO_HH_
#define CEREMONY_MODELS_SCENARIO_HH_

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ceremony/kernel/model.hh"

namespace ceremony::models {

enum class Browser { kSeb, kFirefox, kChrome, kSafari, kIe, kOperaMini };
enum class Mode { kClassic, kPrivate, kInterleaved };

/// One of the twelve browser/mode rows of the verdict table.
class ScenarioId {
 public:
  /// Throws Error(kInvalidScenario) for combinations outside the table.
  ScenarioId(Browser browser, Mode mode);

  /// Parses the stable identifier (`seb`, `firefox:classic`, `opera-mini`...).
  static ScenarioId Parse(std::string_view text);
  /// All twelve rows, in table order.
  static const std::vector<ScenarioId>& All();

  Browser browser() const { return browser_; }
  Mode mode() const { return mode_; }
  std::string str() const;

  friend bool operator==(ScenarioId a, ScenarioId b) {
    return a.browser_ == b.browser_ && a.mode_ == b.mode_;
  }
  friend bool operator<(ScenarioId a, ScenarioId b) {
    return std::pair(a.browser_, a.mode_) < std::pair(b.browser_, b.mode_);
  }

 private:
  Browser browser_;
  Mode mode_;
};

/// Socio-technical requirement numbers 1..5 and their stable identifiers.
inline constexpr int kPropertyCount = 5;
std::string_view PropertyName(int id);
/// Accepts `warning-users`... as well as `1`..`5` and `P1`..`P5`.
int ParseProperty(std::string_view text);

struct ScenarioOptions {
  bool assume_no_expiry = false;
  std::optional<std::size_t> state_limit;
  /// Evaluate the properties' CertificateIsValid with the revocation-aware
  /// variant on Safari rows. Off by default: the assertions are taken as
  /// written.
  bool safari_nr_validity = false;
};

/// Narrative role of a process definition.
enum class Role { kUser, kBrowser, kHonestServer, kIntruder, kSystem };
std::string_view RoleName(Role role);

struct Scenario {
  ScenarioId id;
  ScenarioOptions options;
  std::string source;  // CSP# text the model was parsed from
  std::shared_ptr<const kernel::ModelDef> model;
  std::vector<int> properties;  // applicable property numbers

  Role RoleOf(kernel::DefinitionId def) const;
  bool Applies(int property) const;
};

/// Builds the complete system for `id`: common parts plus the browser process.
Scenario BuildScenario(ScenarioId id, const ScenarioOptions& options = {});

/// Only the CSP# source text; BuildScenario parses exactly this.
std::string ScenarioSource(ScenarioId id, const ScenarioOptions& options = {});

enum class Expected { kHolds, kViolated, kNotApplicable };
std::string_view ExpectedName(Expected e);

/// The published verdict for a (scenario, property) cell.
Expected ExpectedVerdict(ScenarioId id, int property);

/// Cells checked under the no-expiry assumption by default.
const std::set<std::pair<ScenarioId, int>>& NoExpiryScenarios();

}  // namespace ceremony::models

#endif /* CEREMONY_MODELS_SCENARIO_HH_ */
