// SPDX-License-Identifier: Apache-2.0
#include <deli/llm.hpp>
#include <deli/retrieval.hpp>

#include <json.hpp>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace deli::llm
{

using json = nlohmann::ordered_json;

std::string normalize_whitespace(std::string_view text)
{
    std::string out;
    bool space = false;
    for (char c: text)
    {
        if (std::isspace(static_cast<unsigned char>(c)))
        {
            space = !out.empty();
            continue;
        }
        if (space)
            out += ' ';
        space = false;
        out += c;
    }
    return out;
}

std::string fingerprint(const ChatRequest& request)
{
    std::string buf = request.model;
    buf += '\x1e';
    for (const auto& m: request.messages)
    {
        buf += m.role;
        buf += '\x1f';
        buf += normalize_whitespace(m.content);
        buf += '\x1e';
    }
    for (const auto& s: request.stop)
    {
        buf += s;
        buf += '\x1d';
    }
    return retrieval::sha256_hex(buf);
}

std::string apply_stop(std::string text, const std::vector<std::string>& stop)
{
    std::size_t cut = text.size();
    for (const auto& s: stop)
        if (!s.empty())
            cut = std::min(cut, text.find(s));
    text.resize(cut);
    return text;
}

// ---------------------------------------------------------------- live

LiveConfig LiveConfig::from_env()
{
    LiveConfig c;
    if (const char* base = std::getenv("DELI_API_BASE"); base && *base)
        c.base_url = base;
    if (const char* key = std::getenv("DELI_API_KEY"); key && *key)
        c.api_key = key;
    else if (const char* openai = std::getenv("OPENAI_API_KEY"); openai && *openai)
        c.api_key = openai;
    return c;
}

LiveBackend::LiveBackend(LiveConfig config, Transport transport):
    config_(std::move(config)), transport_(std::move(transport)),
    sleep_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }),
    slots_(std::max<std::ptrdiff_t>(1, std::min<std::ptrdiff_t>(config_.max_in_flight, 1024)))
{
    if (!transport_)
        transport_ = http_transport(config_);
}

std::string LiveBackend::request_body(const ChatRequest& request) const
{
    json body;
    body["model"] = request.model.empty() ? config_.model : request.model;
    json messages = json::array();
    for (const auto& m: request.messages)
        messages.push_back({{"role", m.role}, {"content", m.content}});
    body["messages"] = std::move(messages);
    body["temperature"] = request.temperature;
    body["top_p"] = request.top_p;
    if (!request.stop.empty())
        body["stop"] = request.stop;
    return body.dump();
}

std::string LiveBackend::complete(const ChatRequest& request)
{
    if (request.messages.empty())
        throw GatewayError("InvalidRequest", "a chat request needs at least one message", false);
    const std::string body = request_body(request);
    struct Slot
    {
        std::counting_semaphore<1024>& s;
        explicit Slot(std::counting_semaphore<1024>& sem): s(sem) { s.acquire(); }
        ~Slot() { s.release(); }
    } slot(slots_);

    auto wait = config_.backoff;
    std::string last;
    for (int attempt = 1; attempt <= config_.attempts; ++attempt)
    {
        HttpResult r = transport_(body, config_.deadline);
        if (r.status == 200)
        {
            try
            {
                auto doc = nlohmann::json::parse(r.body);
                const auto& content = doc.at("choices").at(0).at("message").at("content");
                return apply_stop(content.is_null() ? std::string() : content.get<std::string>(), request.stop);
            }
            catch (const nlohmann::json::exception& e)
            {
                throw GatewayError("BadResponse", std::string("unexpected response body: ") + e.what(), false);
            }
        }
        bool retriable = r.status == 0 || r.status == 429 || r.status >= 500;
        last = r.status == 0 ? "transport failure: " + r.error
                             : "HTTP " + std::to_string(r.status) + ": " + r.body.substr(0, 300);
        if (!retriable)
            throw GatewayError("HttpStatus", last, false);
        if (attempt < config_.attempts)
        {
            sleep_(wait);
            wait *= 2;
        }
    }
    throw GatewayError("RetriesExhausted",
                       "gave up after " + std::to_string(config_.attempts) + " attempts; last error " + last, true);
}

// ---------------------------------------------------------------- scripted

ScriptedBackend::ScriptedBackend(std::vector<Rule> rules): rules_(std::move(rules)) {}

std::string ScriptedBackend::complete(const ChatRequest& request)
{
    {
        std::lock_guard lock(mutex_);
        requests_.push_back(request);
    }
    const std::string last = request.messages.empty() ? std::string() : request.messages.back().content;
    const Rule* best = nullptr;
    std::size_t best_pos = 0;
    for (const auto& rule: rules_)
    {
        auto pos = last.rfind(rule.key);
        if (pos == std::string::npos)
            continue;
        std::size_t end = pos + rule.key.size();
        if (!best || end > best_pos || (end == best_pos && rule.key.size() > best->key.size()))
        {
            best = &rule;
            best_pos = end;
        }
    }
    if (!best)
        throw GatewayError("UnscriptedRequest",
                           "no scripted reply for request " + fingerprint(request).substr(0, 16), false);
    return apply_stop(best->response, request.stop);
}

std::vector<ScriptedBackend::Rule> ScriptedBackend::load_rules(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SchemaError("(file)", "cannot open rules file " + path.string());
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw SchemaError("(file)", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_array())
        throw SchemaError("rules", "expected an array");
    std::vector<Rule> rules;
    for (std::size_t i = 0; i < doc.size(); ++i)
    {
        std::string where = "rules[" + std::to_string(i) + "]";
        for (const char* key: {"key", "response"})
            if (!doc[i].is_object() || !doc[i].contains(key) || !doc[i][key].is_string())
                throw SchemaError(where + "." + key, "missing or not a string");
        rules.push_back({doc[i]["key"].get<std::string>(), doc[i]["response"].get<std::string>()});
    }
    return rules;
}

std::size_t ScriptedBackend::calls() const
{
    std::lock_guard lock(mutex_);
    return requests_.size();
}

std::vector<ChatRequest> ScriptedBackend::requests() const
{
    std::lock_guard lock(mutex_);
    return requests_;
}

// ---------------------------------------------------------------- cassettes

std::optional<std::string> Cassette::find(const std::string& fingerprint) const
{
    std::lock_guard lock(mutex_);
    auto it = index_.find(fingerprint);
    if (it == index_.end())
        return std::nullopt;
    return records_[it->second].response;
}

void Cassette::put(const std::string& fingerprint, std::string response, std::string note)
{
    std::lock_guard lock(mutex_);
    auto it = index_.find(fingerprint);
    if (it != index_.end())
    {
        if (logger_)
            logger_("cassette: replacing the recorded response for " + fingerprint);
        else
            std::cerr << "warning: cassette: replacing the recorded response for " << fingerprint << "\n";
        records_[it->second].response = std::move(response);
        records_[it->second].note = std::move(note);
        return;
    }
    index_[fingerprint] = records_.size();
    records_.push_back({fingerprint, std::move(response), std::move(note)});
}

std::size_t Cassette::size() const
{
    std::lock_guard lock(mutex_);
    return records_.size();
}

std::vector<std::pair<std::string, std::string>> Cassette::records() const
{
    std::lock_guard lock(mutex_);
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& r: records_)
        out.emplace_back(r.fingerprint, r.response);
    return out;
}

std::shared_ptr<Cassette> Cassette::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SchemaError("(file)", "cannot open cassette " + path.string());
    auto c = std::make_shared<Cassette>();
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line))
    {
        std::string where = "records[" + std::to_string(n++) + "]";
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        nlohmann::json doc;
        try
        {
            doc = nlohmann::json::parse(line);
        }
        catch (const nlohmann::json::parse_error& e)
        {
            throw SchemaError(where, std::string("not valid JSON: ") + e.what());
        }
        for (const char* key: {"fingerprint", "response"})
            if (!doc.contains(key) || !doc[key].is_string())
                throw SchemaError(where + "." + key, "missing or not a string");
        std::string note = doc.contains("note") && doc["note"].is_string() ? doc["note"].get<std::string>() : "";
        c->put(doc["fingerprint"].get<std::string>(), doc["response"].get<std::string>(), note);
    }
    return c;
}

void Cassette::save(const std::filesystem::path& path) const
{
    std::lock_guard lock(mutex_);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write cassette " + path.string());
    for (const auto& r: records_)
    {
        json j;
        j["fingerprint"] = r.fingerprint;
        j["response"] = r.response;
        if (!r.note.empty())
            j["note"] = r.note;
        out << j.dump() << "\n";
    }
}

CassetteBackend::CassetteBackend(std::shared_ptr<Cassette> cassette, CassetteMode mode,
                                 std::shared_ptr<Backend> inner):
    cassette_(std::move(cassette)), mode_(mode), inner_(std::move(inner))
{
    if (mode_ != CassetteMode::Replay && !inner_)
        throw std::invalid_argument("record and passthrough cassettes need an inner backend");
}

std::string CassetteBackend::complete(const ChatRequest& request)
{
    if (mode_ == CassetteMode::Passthrough)
        return inner_->complete(request);
    const std::string fp = fingerprint(request);
    if (mode_ == CassetteMode::Replay)
    {
        if (auto hit = cassette_->find(fp))
            return apply_stop(*hit, request.stop);
        throw GatewayError("UnscriptedRequest", "the cassette has no response for fingerprint " + fp, false);
    }
    std::string response = inner_->complete(request);
    std::string note;
    if (!request.messages.empty())
    {
        note = normalize_whitespace(request.messages.back().content);
        if (note.size() > 120)
            note = "..." + note.substr(note.size() - 117);
    }
    cassette_->put(fp, response, note);
    return response;
}

std::string CountingBackend::complete(const ChatRequest& request)
{
    {
        std::lock_guard lock(mutex_);
        ++calls_;
    }
    return inner_->complete(request);
}

std::size_t CountingBackend::calls() const
{
    std::lock_guard lock(mutex_);
    return calls_;
}

} // namespace deli::llm
