/*
 * Copyright 2026 The advsens Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <thread>

#include "advsens/errors.hpp"
#include "advsens/remote.hpp"

using namespace advsens;
using nlohmann::json;

namespace {

/// In-process stub implementing the wire contract: class-1 probability
/// rises with text length (a stand-in for a real classifier service).
class StubServer {
public:
    explicit StubServer(bool wrong_arity = false) {
        server_.Post("/predict", [wrong_arity](const httplib::Request& req,
                                               httplib::Response& res) {
            const json body = json::parse(req.body);
            json probs = json::array();
            for (const auto& t : body.at("texts")) {
                const double p1 =
                    std::min(0.9, 0.1 * static_cast<double>(t.get<std::string>().size()));
                if (wrong_arity) probs.push_back({1.0 - p1, p1, 0.0});
                else probs.push_back({1.0 - p1, p1});
            }
            res.set_content(json{{"probs", probs}}.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~StubServer() {
        server_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

} // namespace

TEST_CASE("remote predictions follow argmax semantics") {
    StubServer server;
    const ModelHandle m = make_remote_handle(server.url(), 2);
    const Prediction p = m.predict("12345678"); // p1 = 0.8
    REQUIRE(p.probs.size() == 2);
    CHECK(p.probs[1] == doctest::Approx(0.8));
    CHECK(p.predicted_class == 1);
    CHECK(p.confidence == doctest::Approx(0.8));
}

TEST_CASE("remote batches keep request order") {
    StubServer server;
    const ModelHandle m = make_remote_handle(server.url(), 2);
    const std::vector<std::string> texts = {"aa", "aaaaaaaa", "a"};
    const auto preds = m.predict_batch(texts);
    REQUIRE(preds.size() == 3);
    CHECK(preds[0].probs[1] == doctest::Approx(0.2));
    CHECK(preds[1].probs[1] == doctest::Approx(0.8));
    CHECK(preds[2].probs[1] == doctest::Approx(0.1));
}

TEST_CASE("wrong probability arity is a protocol error") {
    StubServer server(/*wrong_arity=*/true);
    const ModelHandle m = make_remote_handle(server.url(), 2);
    CHECK_THROWS_AS(m.predict("hello"), ProtocolError);
}

TEST_CASE("unreachable backend is a transport error") {
    // nothing listens on this port
    const ModelHandle m = make_remote_handle("http://127.0.0.1:1", 2);
    CHECK_THROWS_AS(m.predict("hello"), TransportError);
}

TEST_CASE("remote handles expose the declared class count") {
    StubServer server;
    const ModelHandle m = make_remote_handle(server.url(), 2, {"neg", "pos"});
    CHECK(m.class_count() == 2);
    CHECK(m.class_labels()[1] == "pos");
    CHECK(m.differentiable() == nullptr);
    CHECK_THROWS_AS(make_remote_handle(server.url(), 1), ConfigError);
}
