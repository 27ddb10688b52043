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

#include "ceremony/models/scenario.hh"

#include <array>

#include "ceremony/kernel/error.hh"
#include "ceremony/kernel/parser.hh"

namespace ceremony::models {

namespace {

// Declarations, user, servers and the composed system shared by every row.
// Set universes are explicit: URLs for the HSTS lists, and the product of
// the certificate field domains for the certificate store (the last field
// stays 0 in browsers that do not record revocation).
constexpr std::string_view kCommon = R"csp(
enum {HelloClient, HelloServer, ClientFinished, ServerFinished,
      Data, Warning, Webpage, Continue, Abort, StoreCertificate,
      Pk, HSTS, No_HSTS, S, I, SignCA, SignS, SignI, expi,
      noexpi, revo, norevo};

channel ui 0;
channel network 0;

var<Set> dynamicHSTSList : {S, I};
var<Set> preloadedHSTSList : {S, I};
var<SetArray> ServerCert : {S, I} * {Pk} * {SignCA, SignS, SignI} * {S, I}
                         * {expi, noexpi} * {revo, norevo, 0};
var cert[3];
var extendedcert[6];
var typed_url: {S..I} = S;

#define CertificateIsValid cert[0]==typed_url &&
                           cert[2]==SignCA &&
                           extendedcert[4]==noexpi;
#define CertificateIsValidNR cert[0]==typed_url &&
                             cert[2]==SignCA &&
                             extendedcert[4]==noexpi &&
                             extendedcert[5]==norevo;
#define URLhasHSTSpolicy dynamicHSTSList.Contains(typed_url) ||
                         preloadedHSTSList.Contains(typed_url);
#define CertificateIsStored ServerCert.Contains(extendedcert);

var intruder_server = false;
var user_warned = false;
var finishTLS = false;
var preload = false;

Intruder() = ServerI() [] ServerH();

ServerI() = []header:{HSTS, No_HSTS}@ []url:{S, I}@
            []sk:{SignI, SignCA}@
            Init_TLS ->
            network?urlx.HelloClient ->
            ifa (url==S && sk==SignCA) {
               network!HelloServer.url.Pk.SignI -> Skip}
            else {network!HelloServer.url.Pk.sk -> Skip};
            Finish_TLS ->
            network?m ->
            ifa (m==ClientFinished) {
               INTRUDER_IN{intruder_server=true} ->
               network!ServerFinished.header.Data -> Skip
            };
            Intruder();

ServerH() = []header:{HSTS, No_HSTS}@ []sk:{SignS, SignCA}@
            Init_TLS ->
            network?urlx.HelloClient ->
            network!HelloServer.S.Pk.sk ->
            Finish_TLS ->
            network?m ->
            ifa (m==ClientFinished) {
               network!ServerFinished.header.Data -> Skip};
            Intruder();

User() = ui?webpage ->
         case {
           webpage == Webpage: ui!S{typed_url=S} -> User() []
                               ui!I{typed_url=I} -> User()
           webpage == Warning: ui!StoreCertificate -> User() []
                               ui!Continue -> User() []
                               ui!Abort -> User()
           default: User()
         };

Model = Preloading() [] Begin();
Preloading = PreloadHSTSpolicy -> {preloadedHSTSList.Add(S);
                                   preload=true} -> Begin;
Begin = Intruder() ||| User() ||| Browser();

#define UserwantS typed_url==S;
#define AuthFail intruder_server && UserwantS;
#define User_warned user_warned;
#define CompleteTLS finishTLS;
#define Preload preload;
)csp";

// Session opening shared by every browser, up to the certificate check.
// `@EXP@` is the expiry domain; `@RECV@` the fields recorded on receipt.
constexpr std::string_view kOpening = R"csp(
            []rev:{revo, norevo}@[]exp:{@EXP@}@
            Display_Webpage ->
            ui!Webpage{finishTLS=false; intruder_server=false;
                       user_warned=false;} ->
            ui?url ->
            Resolve_URL ->
            Init_TLS ->
            network!url.HelloClient ->
            network?HelloServer.id.pk.sk{@RECV@} ->
            Check_Certificate ->)csp";

// Only cert[] is recorded, plus the expiry field the shared validity macro
// reads.
constexpr std::string_view kRecvBasic =
    "cert[0]=id; cert[1]=pk; cert[2]=sk; extendedcert[4]=exp";
constexpr std::string_view kRecvExtended =
    "extendedcert[0]=cert[0]=id; extendedcert[1]=cert[1]=pk; "
    "extendedcert[2]=cert[2]=sk; extendedcert[3]=url; extendedcert[4]=exp";
constexpr std::string_view kRecvExtendedRev =
    "extendedcert[0]=cert[0]=id; extendedcert[1]=cert[1]=pk; "
    "extendedcert[2]=cert[2]=sk; extendedcert[3]=url; extendedcert[4]=exp; "
    "extendedcert[5]=rev";

// Completion; `@TAIL@` follows the data display.
constexpr std::string_view kClosing = R"csp(
            @IF@ (!finishTLS)
              {network!Abort -> Skip}
            else {
                Finish_TLS ->
                network!ClientFinished ->
                Process_DATA ->
                network?ServerFinished.header.Data ->
                Display_Webpage ->
                ui!Data -> @TAIL@
            })csp";

constexpr std::string_view kTailHsts = R"csp(
                Check_Header ->
                @IF@ (header==HSTS && @VALID@)
                   {StoreHSTSpolicy ->
                    {dynamicHSTSList.Add(cert[0])} -> Skip})csp";

// Warning dialogue; `@STORE@` is the StoreCertificate handling (or empty).
constexpr std::string_view kWarn = R"csp(
                        DisplayWarning ->
                        ui!Warning{user_warned=true} ->
                        ui?userchoice ->
                        tau{
                            if (userchoice == Abort)
                              {finishTLS=false}
                            else {
                                finishTLS=true;@STORE@
                            }
                        } -> Skip)csp";

constexpr std::string_view kStore = R"csp(
                                if (userchoice == StoreCertificate)
                                  {ServerCert.Add(extendedcert);})csp";

constexpr std::string_view kDecisionSeb = R"csp(
            if (rev==revo) {{finishTLS=false} -> Skip}
            else {
                if (CertificateIsValid) {{finishTLS=true} -> Skip}
                else {{finishTLS=false} -> Skip}
            };)csp";

constexpr std::string_view kDecisionFirefox = R"csp(
            @IF@ (CertificateIsValid) {{finishTLS=true} -> Skip}
            else {
                @IF@ (URLhasHSTSpolicy || rev==revo)
                   {{finishTLS=false} -> Skip}
                else {
                    @IF@ (CertificateIsStored)
                       {{finishTLS=true} -> Skip}
                    else {@WARN@
                    }
                }
            };)csp";

constexpr std::string_view kDecisionChrome = R"csp(
            if (CertificateIsValid) {{finishTLS=true} -> Skip}
            else {
                if (URLhasHSTSpolicy || rev==revo)
                  {{finishTLS=false} -> Skip}
                else {@WARN@
                }
            };)csp";

constexpr std::string_view kDecisionSafariClassic = R"csp(
            if (CertificateIsValidNR || CertificateIsStored)
              {{finishTLS=true} -> Skip}
            else {
                if (URLhasHSTSpolicy || rev==revo)
                  {{finishTLS=false} -> Skip}
                else {@WARN@
                }
            };)csp";

constexpr std::string_view kDecisionSafariPrivate = R"csp(
            if (CertificateIsValidNR || CertificateIsStored)
              {{finishTLS=true} -> Skip}
            else {@WARN@
            };)csp";

constexpr std::string_view kDecisionIe = R"csp(
            if (rev==revo) {{finishTLS=false} -> Skip}
            else {
                if (CertificateIsValid) {{finishTLS=true} -> Skip}
                else {@WARN@
                }
            };)csp";

constexpr std::string_view kDecisionOperaMini = R"csp(
            if (rev==revo) {{finishTLS=false} -> Skip}
            else {{finishTLS=true} -> Skip};)csp";

void ReplaceAll(std::string* s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s->find(from, pos)) != std::string::npos) {
    s->replace(pos, from.size(), to);
    pos += to.size();
  }
}

/// The parameters that distinguish one session body from another.
struct SessionShape {
  std::string_view recv;
  std::string_view decision;
  bool warn_store = false;        // StoreCertificate persists the certificate
  std::string_view hsts_validity; // empty: no HSTS storing
  bool atomic_ifs = false;        // listing uses `ifa`
};

SessionShape ShapeOf(Browser b, bool private_mode) {
  switch (b) {
    case Browser::kSeb:
      return {kRecvBasic, kDecisionSeb, false, "", false};
    case Browser::kFirefox:
      return private_mode
                 ? SessionShape{kRecvExtended, kDecisionFirefox, false, "", false}
                 : SessionShape{kRecvExtended, kDecisionFirefox, true,
                                "CertificateIsValid", true};
    case Browser::kChrome:
      return private_mode
                 ? SessionShape{kRecvBasic, kDecisionChrome, false, "", false}
                 : SessionShape{kRecvBasic, kDecisionChrome, false,
                                "CertificateIsValid", false};
    case Browser::kSafari:
      return private_mode
                 ? SessionShape{kRecvExtendedRev, kDecisionSafariPrivate, true,
                                "", false}
                 : SessionShape{kRecvExtendedRev, kDecisionSafariClassic, true,
                                "CertificateIsValidNR", false};
    case Browser::kIe:
      return {kRecvBasic, kDecisionIe, false, "", false};
    case Browser::kOperaMini:
      return {kRecvBasic, kDecisionOperaMini, false, "", false};
  }
  throw Error(ErrorCode::kInvalidScenario, "unknown browser");
}

/// One browsing session: opening, certificate decision, completion.
std::string SessionBody(Browser b, bool private_mode, bool no_expiry) {
  SessionShape shape = ShapeOf(b, private_mode);
  std::string text(kOpening);
  text += shape.decision;
  text += kClosing;
  std::string warn(kWarn);
  ReplaceAll(&warn, "@STORE@", shape.warn_store ? kStore : "");
  std::string tail = "Skip";
  if (!shape.hsts_validity.empty()) {
    tail = std::string(kTailHsts);
    ReplaceAll(&tail, "@VALID@", shape.hsts_validity);
  }
  ReplaceAll(&text, "@WARN@", warn);
  ReplaceAll(&text, "@TAIL@", tail);
  ReplaceAll(&text, "@IF@", shape.atomic_ifs ? "ifa" : "if");
  ReplaceAll(&text, "@RECV@", shape.recv);
  ReplaceAll(&text, "@EXP@", no_expiry ? "noexpi" : "expi, noexpi");
  return text;
}

constexpr std::array<std::string_view, kPropertyCount> kPropertyNames = {
    "warning-users", "storing-certs", "hsts-user-security", "hsts-bootstrap",
    "cert-history",
};

using E = Expected;
constexpr E H = E::kHolds;
constexpr E V = E::kViolated;
constexpr E N = E::kNotApplicable;

// Rows in ScenarioId::All() order.
constexpr std::array<std::array<E, kPropertyCount>, 12> kExpected = {{
    {H, H, H, N, H},  // seb
    {V, V, H, H, V},  // firefox:classic
    {H, H, V, H, V},  // firefox:private
    {V, V, V, H, V},  // firefox:interleaved
    {H, H, H, H, V},  // chrome:classic
    {H, H, V, H, V},  // chrome:private
    {H, H, V, H, V},  // chrome:interleaved
    {V, V, V, H, V},  // safari:classic
    {V, V, V, V, V},  // safari:private
    {V, V, V, V, V},  // safari:interleaved
    {H, H, V, N, V},  // ie
    {V, H, V, N, V},  // opera-mini
}};

std::size_t RowOf(ScenarioId id) {
  const auto& all = ScenarioId::All();
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i] == id) return i;
  }
  throw Error(ErrorCode::kInvalidScenario, "unknown scenario");
}

bool HasModes(Browser b) {
  return b == Browser::kFirefox || b == Browser::kChrome ||
         b == Browser::kSafari;
}

}  // namespace

// ---------------------------------------------------------------------------
// Identifiers

ScenarioId::ScenarioId(Browser browser, Mode mode)
    : browser_(browser), mode_(mode) {
  if (!HasModes(browser) && mode != Mode::kClassic) {
    throw Error(ErrorCode::kInvalidScenario,
                "browser has a single browsing mode; use its plain identifier");
  }
}

const std::vector<ScenarioId>& ScenarioId::All() {
  static const std::vector<ScenarioId> all = {
      {Browser::kSeb, Mode::kClassic},
      {Browser::kFirefox, Mode::kClassic},
      {Browser::kFirefox, Mode::kPrivate},
      {Browser::kFirefox, Mode::kInterleaved},
      {Browser::kChrome, Mode::kClassic},
      {Browser::kChrome, Mode::kPrivate},
      {Browser::kChrome, Mode::kInterleaved},
      {Browser::kSafari, Mode::kClassic},
      {Browser::kSafari, Mode::kPrivate},
      {Browser::kSafari, Mode::kInterleaved},
      {Browser::kIe, Mode::kClassic},
      {Browser::kOperaMini, Mode::kClassic},
  };
  return all;
}

std::string ScenarioId::str() const {
  std::string base;
  switch (browser_) {
    case Browser::kSeb: return "seb";
    case Browser::kIe: return "ie";
    case Browser::kOperaMini: return "opera-mini";
    case Browser::kFirefox: base = "firefox"; break;
    case Browser::kChrome: base = "chrome"; break;
    case Browser::kSafari: base = "safari"; break;
  }
  switch (mode_) {
    case Mode::kClassic: return base + ":classic";
    case Mode::kPrivate: return base + ":private";
    case Mode::kInterleaved: return base + ":interleaved";
  }
  return base;
}

ScenarioId ScenarioId::Parse(std::string_view text) {
  for (const auto& id : All()) {
    if (id.str() == text) return id;
  }
  throw Error(ErrorCode::kInvalidScenario,
              "unknown scenario '" + std::string(text) + "'");
}

std::string_view PropertyName(int id) {
  if (id < 1 || id > kPropertyCount) {
    throw Error(ErrorCode::kUnknownPropertyId,
                "unknown property " + std::to_string(id));
  }
  return kPropertyNames[id - 1];
}

int ParseProperty(std::string_view text) {
  for (int i = 1; i <= kPropertyCount; ++i) {
    std::string n = std::to_string(i);
    if (text == kPropertyNames[i - 1] || text == n || text == "P" + n) return i;
  }
  throw Error(ErrorCode::kUnknownPropertyId,
              "unknown property '" + std::string(text) + "'");
}

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kUser: return "User";
    case Role::kBrowser: return "Browser";
    case Role::kHonestServer: return "Honest Server";
    case Role::kIntruder: return "Intruder";
    case Role::kSystem: return "System";
  }
  return "System";
}

std::string_view ExpectedName(Expected e) {
  switch (e) {
    case Expected::kHolds: return "holds";
    case Expected::kViolated: return "violated";
    case Expected::kNotApplicable: return "not-applicable";
  }
  return "?";
}

Expected ExpectedVerdict(ScenarioId id, int property) {
  PropertyName(property);
  return kExpected[RowOf(id)][property - 1];
}

const std::set<std::pair<ScenarioId, int>>& NoExpiryScenarios() {
  static const std::set<std::pair<ScenarioId, int>> cells = {
      {ScenarioId(Browser::kFirefox, Mode::kClassic), 3},
      {ScenarioId(Browser::kFirefox, Mode::kClassic), 4},
      {ScenarioId(Browser::kSafari, Mode::kClassic), 4},
      {ScenarioId(Browser::kFirefox, Mode::kInterleaved), 4},
  };
  return cells;
}

// ---------------------------------------------------------------------------
// Scenario construction

std::string ScenarioSource(ScenarioId id, const ScenarioOptions& options) {
  std::string text(kCommon);
  const Browser b = id.browser();
  const bool nx = options.assume_no_expiry;
  switch (id.mode()) {
    case Mode::kClassic:
      text += "\nBrowser() =" + SessionBody(b, false, nx) + ";\n" +
              "            Browser();\n";
      break;
    case Mode::kPrivate:
      text += "\nBrowser() =" + SessionBody(b, true, nx) + ";\n" +
              "            Browser();\n";
      break;
    case Mode::kInterleaved:
      text += "\nClassicSession() =" + SessionBody(b, false, nx) + ";\n";
      text += "\nPrivateSession() =" + SessionBody(b, true, nx) + ";\n";
      text +=
          "\nBrowser() = (ClassicSession(); Browser()) []\n"
          "            (PrivateSession(); Browser());\n";
      break;
  }
  return text;
}

Scenario BuildScenario(ScenarioId id, const ScenarioOptions& options) {
  Scenario s{id, options, ScenarioSource(id, options), nullptr, {}};
  s.model = std::make_shared<const kernel::ModelDef>(kernel::ParseModel(s.source));
  for (int p = 1; p <= kPropertyCount; ++p) {
    if (ExpectedVerdict(id, p) != Expected::kNotApplicable) {
      s.properties.push_back(p);
    }
  }
  return s;
}

Role Scenario::RoleOf(kernel::DefinitionId def) const {
  const std::string& name = model->definition(def).name;
  if (name == "ServerI") return Role::kIntruder;
  if (name == "ServerH") return Role::kHonestServer;
  if (name == "User") return Role::kUser;
  if (name == "Browser" || name == "ClassicSession" ||
      name == "PrivateSession") {
    return Role::kBrowser;
  }
  return Role::kSystem;
}

bool Scenario::Applies(int property) const {
  for (int p : properties) {
    if (p == property) return true;
  }
  return false;
}

}  // namespace ceremony::models
