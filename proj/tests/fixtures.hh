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

#ifndef CEREMONY_TESTS_FIXTURES_HH_
#define CEREMONY_TESTS_FIXTURES_HH_

#include <string_view>
#include <vector>

namespace ceremony::testing {

struct Fixture {
  std::string_view name;
  std::string_view source;  // entry process is always `Model`
};

inline constexpr std::string_view kEnum =
    "enum {HelloClient, HelloServer, ClientFinished, ServerFinished, Data,\n"
    "      Warning, Webpage, Continue, Abort, StoreCertificate, Pk, HSTS,\n"
    "      No_HSTS, S, I};\n";

// Small models covering every process construct the kernel supports.
inline const std::vector<Fixture>& Fixtures() {
  static const std::vector<Fixture> all = {
      {"stop", "Model = Stop;"},
      {"chain", "Model = a -> b -> Skip;"},
      {"rendezvous", R"(
enum {HelloClient, HelloServer, ClientFinished, ServerFinished, Data,
      Warning, Webpage, Continue, Abort, StoreCertificate, Pk, HSTS,
      No_HSTS, S, I};
channel ui 0;
var typed_url: {S..I} = I;
P = done -> Skip;
Q(x) = got -> Skip;
Model = (ui!S{typed_url=S} -> P) ||| (ui?x -> Q(x));
)"},
      {"choice_loop", "Model = (a -> Skip [] b -> Stop); c -> Model;"},
      {"indexed_set", R"(
enum {HelloClient, HelloServer, ClientFinished, ServerFinished, Data,
      Warning, Webpage, Continue, Abort, StoreCertificate, Pk, HSTS,
      No_HSTS, S, I};
var<Set> seen : {S, I};
Model = []u:{S, I}@ (pick{seen.Add(u)} ->
          if (seen.Contains(S)) { yes -> Model } else { no -> Model });
)"},
      {"nested_par", "Model = ((a -> Skip ||| b -> Skip) ||| c -> Skip); d -> Skip;"},
      {"handshake", R"(
enum {HelloClient, HelloServer, ClientFinished, ServerFinished, Data,
      Warning, Webpage, Continue, Abort, StoreCertificate, Pk, HSTS,
      No_HSTS, S, I};
channel net 0;
var last: {S..I} = S;
var got[2];
Srv = net?HelloClient.u -> net!HelloServer.u.Pk -> Srv;
Cli = []u:{S, I}@ net!HelloClient.u ->
      net?HelloServer.v.k{last=v; got[0]=v; got[1]=k} -> Skip;
Model = Srv ||| (Cli; Cli);
)"},
      {"case_array", R"(
var a[2];
var done = false;
Model = case {
          a[0] == 0: first{a[0]=1} -> Model
          a[1] == 0: second{a[1]=1} -> Model
          default: finish{done=true} -> Stop
        };
)"},
      {"ifa_fallthrough", R"(
var f = false;
Model = ifa (f) { x -> Skip }; y{f = true} -> Model;
)"},
      {"interleaved_loops", R"(
enum {HelloClient, HelloServer, ClientFinished, ServerFinished, Data,
      Warning, Webpage, Continue, Abort, StoreCertificate, Pk, HSTS,
      No_HSTS, S, I};
channel ui 0;
var page: {S..I} = S;
User = ui?w -> (ui!S -> User [] ui!I -> User);
Browser = ui!Webpage{page=S} -> ui?u{page=u} -> (tau -> Browser [] stop -> Skip);
Model = User ||| Browser ||| (tick -> Skip);
)"},
  };
  return all;
}

}  // namespace ceremony::testing

#endif /* CEREMONY_TESTS_FIXTURES_HH_ */
