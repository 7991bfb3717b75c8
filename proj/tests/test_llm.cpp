// SPDX-License-Identifier: Apache-2.0
#include <deli/llm.hpp>

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>

using namespace deli;
using namespace deli::llm;

namespace
{

ChatRequest request(std::string text, std::vector<std::string> stop = {})
{
    ChatRequest r;
    r.messages = {{"system", "You solve algebra."}, {"user", std::move(text)}};
    r.stop = std::move(stop);
    return r;
}

std::filesystem::path temp(const std::string& name)
{
    return std::filesystem::temp_directory_path() / name;
}

// Fails the test if the inner backend is ever reached.
struct Tripwire : Backend
{
    std::size_t hits = 0;
    std::string complete(const ChatRequest&) override
    {
        ++hits;
        return "network";
    }
};

} // namespace

TEST(Fingerprint, WhitespaceStable)
{
    auto a = request("solve  x + 1 = 0\n");
    auto b = request(" solve x +\t1 = 0");
    EXPECT_EQ(fingerprint(a), fingerprint(b));
    EXPECT_EQ(fingerprint(a).size(), 64u);
    b.temperature = 0.7;
    EXPECT_EQ(fingerprint(a), fingerprint(b));
    EXPECT_NE(fingerprint(a), fingerprint(request("solve x + 2 = 0")));
    EXPECT_NE(fingerprint(a), fingerprint(request("solve x + 1 = 0", {"Output:"})));
    auto other_model = a;
    other_model.model = "gpt-4";
    EXPECT_NE(fingerprint(a), fingerprint(other_model));
}

TEST(Stop, CutsAtEarliestSequence)
{
    EXPECT_EQ(apply_stop("Action: expand($x$)\nOutput: $x$", {"Output:"}), "Action: expand($x$)\n");
    EXPECT_EQ(apply_stop("a STOP b END", {"END", "STOP"}), "a ");
    EXPECT_EQ(apply_stop("nothing", {"Output:"}), "nothing");
}

TEST(Replay, HitNeverReachesInner)
{
    auto cassette = std::make_shared<Cassette>();
    cassette->put(fingerprint(request("p")), "recorded");
    auto wire = std::make_shared<Tripwire>();
    CassetteBackend replay(cassette, CassetteMode::Replay, wire);
    EXPECT_EQ(replay.complete(request("p")), "recorded");
    EXPECT_EQ(wire->hits, 0u);
}

TEST(Replay, MissNamesFingerprint)
{
    CassetteBackend replay(std::make_shared<Cassette>(), CassetteMode::Replay);
    auto req = request("absent");
    try
    {
        replay.complete(req);
        FAIL() << "expected a gateway error";
    }
    catch (const GatewayError& e)
    {
        EXPECT_EQ(e.reason(), "UnscriptedRequest");
        EXPECT_NE(std::string(e.what()).find(fingerprint(req)), std::string::npos);
        EXPECT_FALSE(e.retriable());
    }
}

TEST(Cassette, RecordThenLoadIsIdentical)
{
    auto scripted = std::make_shared<ScriptedBackend>(
        std::vector<ScriptedBackend::Rule> {{"first", "one"}, {"second", "two\nlines"}});
    auto cassette = std::make_shared<Cassette>();
    CassetteBackend record(cassette, CassetteMode::Record, scripted);
    record.complete(request("first"));
    record.complete(request("second"));
    auto path = temp("deli_cassette_roundtrip.jsonl");
    cassette->save(path);
    auto loaded = Cassette::load(path);
    EXPECT_EQ(*loaded, *cassette);
    EXPECT_EQ(loaded->size(), 2u);
    EXPECT_EQ(loaded->records()[0].second, "one");

    CassetteBackend replay(loaded, CassetteMode::Replay);
    EXPECT_EQ(replay.complete(request("second")), "two\nlines");
}

TEST(Cassette, EmptyRoundTrip)
{
    Cassette empty;
    auto path = temp("deli_cassette_empty.jsonl");
    empty.save(path);
    EXPECT_EQ(std::filesystem::file_size(path), 0u);
    auto loaded = Cassette::load(path);
    EXPECT_EQ(loaded->size(), 0u);
}

TEST(Cassette, DuplicateLastWriteWinsWithWarning)
{
    Cassette c;
    std::vector<std::string> log;
    c.set_logger([&](const std::string& m) { log.push_back(m); });
    c.put("fp", "old");
    c.put("other", "x");
    c.put("fp", "new");
    EXPECT_EQ(c.size(), 2u);
    EXPECT_EQ(c.find("fp"), "new");
    ASSERT_EQ(log.size(), 1u);
    EXPECT_NE(log[0].find("fp"), std::string::npos);
    EXPECT_EQ(c.records()[0].first, "fp");
}

TEST(Cassette, MalformedFilesRaiseSchemaError)
{
    auto path = temp("deli_cassette_bad.jsonl");
    {
        std::ofstream out(path);
        out << R"({"fingerprint":"a","response":"r"})" << "\n" << R"({"fingerprint":"b"})" << "\n";
    }
    try
    {
        Cassette::load(path);
        FAIL() << "expected a schema error";
    }
    catch (const SchemaError& e)
    {
        EXPECT_EQ(e.field(), "records[1].response");
    }
    {
        std::ofstream out(path);
        out << "not json\n";
    }
    EXPECT_THROW(Cassette::load(path), SchemaError);
}

TEST(Live, BodyCarriesSamplingDefaults)
{
    std::string seen;
    LiveBackend live({}, [&](const std::string& body, std::chrono::milliseconds) {
        seen = body;
        return HttpResult {200, R"({"choices":[{"message":{"content":"Action: x\nOutput: y"}}]})", ""};
    });
    EXPECT_EQ(live.complete(request("q", {"Output:"})), "Action: x\n");
    auto body = nlohmann::json::parse(seen);
    EXPECT_EQ(body["temperature"], 0.0);
    EXPECT_EQ(body["top_p"], 1.0);
    EXPECT_EQ(body["stop"][0], "Output:");
    EXPECT_EQ(body["messages"].size(), 2u);
}

TEST(Live, RetriesWithDoublingBackoff)
{
    int attempts = 0;
    LiveConfig config;
    config.backoff = std::chrono::milliseconds(10);
    LiveBackend live(config, [&](const std::string&, std::chrono::milliseconds deadline) {
        ++attempts;
        EXPECT_EQ(deadline, std::chrono::milliseconds(60000));
        return HttpResult {503, "busy", ""};
    });
    std::vector<long> waits;
    live.set_sleep([&](std::chrono::milliseconds d) { waits.push_back(d.count()); });
    try
    {
        live.complete(request("q"));
        FAIL() << "expected a gateway error";
    }
    catch (const GatewayError& e)
    {
        EXPECT_EQ(e.reason(), "RetriesExhausted");
        EXPECT_TRUE(e.retriable());
    }
    EXPECT_EQ(attempts, 3);
    EXPECT_EQ(waits, (std::vector<long> {10, 20}));
}

TEST(Live, RecoversAfterTransientFailure)
{
    int attempts = 0;
    LiveBackend live({}, [&](const std::string&, std::chrono::milliseconds) {
        if (++attempts == 1)
            return HttpResult {0, "", "connection reset"};
        return HttpResult {200, R"({"choices":[{"message":{"content":"fine"}}]})", ""};
    });
    live.set_sleep([](std::chrono::milliseconds) {});
    EXPECT_EQ(live.complete(request("q")), "fine");
    EXPECT_EQ(attempts, 2);
}

TEST(Live, ClientErrorsAreNotRetried)
{
    int attempts = 0;
    LiveBackend live({}, [&](const std::string&, std::chrono::milliseconds) {
        ++attempts;
        return HttpResult {401, "bad key", ""};
    });
    try
    {
        live.complete(request("q"));
        FAIL() << "expected a gateway error";
    }
    catch (const GatewayError& e)
    {
        EXPECT_EQ(e.reason(), "HttpStatus");
        EXPECT_FALSE(e.retriable());
    }
    EXPECT_EQ(attempts, 1);
    EXPECT_THROW(live.complete(ChatRequest {}), GatewayError);
}

TEST(Scripted, LatestMatchWins)
{
    ScriptedBackend s({{"Question", "start"}, {"Output: [$y=2$]", "Answer: $y=2$"}, {"Output:", "next"}});
    EXPECT_EQ(s.complete(request("Question: p")), "start");
    EXPECT_EQ(s.complete(request("Question: p\nAction: a\nOutput: [$y=2$]")), "Answer: $y=2$");
    EXPECT_EQ(s.complete(request("Question: p\nOutput: [$y=2$]\nAction: b\nOutput: $3$")), "next");
    EXPECT_EQ(s.calls(), 3u);
    try
    {
        s.complete(request("unrelated"));
        FAIL() << "expected a gateway error";
    }
    catch (const GatewayError& e)
    {
        EXPECT_EQ(e.reason(), "UnscriptedRequest");
    }
}

TEST(Counting, CountsConversations)
{
    auto inner = std::make_shared<ScriptedBackend>(std::vector<ScriptedBackend::Rule> {{"", "ok"}});
    CountingBackend counter(inner);
    counter.complete(request("a"));
    counter.complete(request("b"));
    EXPECT_EQ(counter.calls(), 2u);
}
