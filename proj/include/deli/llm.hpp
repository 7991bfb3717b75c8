// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deli/errors.hpp>

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

namespace deli::llm
{

struct Message
{
    std::string role; // system, user, assistant
    std::string content;
};

struct ChatRequest
{
    std::vector<Message> messages;
    std::vector<std::string> stop;
    double temperature = 0.0;
    double top_p = 1.0;
    std::string model = "gpt-3.5-turbo";
};

/// Collapses whitespace runs to one space and trims.
std::string normalize_whitespace(std::string_view text);

/// SHA-256 over the model id, whitespace-normalized messages and stop
/// sequences. Sampling parameters are left out.
std::string fingerprint(const ChatRequest& request);

/// Cuts `text` at the earliest stop sequence.
std::string apply_stop(std::string text, const std::vector<std::string>& stop);

/// Thread-safe completion backend.
class Backend
{
public:
    virtual ~Backend() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
};

// ---------------------------------------------------------------- live

struct HttpResult
{
    int status = 0; // 0 = transport failure
    std::string body;
    std::string error;
};

/// POSTs a JSON body to the chat endpoint within a deadline.
using Transport = std::function<HttpResult(const std::string& body, std::chrono::milliseconds deadline)>;

struct LiveConfig
{
    std::string base_url = "https://api.openai.com/v1";
    std::string api_key;
    std::string model = "gpt-3.5-turbo";
    int attempts = 3;
    std::chrono::milliseconds deadline {60000}; // per attempt
    std::chrono::milliseconds backoff {500};    // doubled after each failed attempt
    std::ptrdiff_t max_in_flight = 4;

    /// DELI_API_BASE, DELI_API_KEY (falling back to OPENAI_API_KEY).
    static LiveConfig from_env();
};

class LiveBackend : public Backend
{
public:
    explicit LiveBackend(LiveConfig config, Transport transport = {});

    std::string complete(const ChatRequest& request) override;

    /// The JSON body sent for `request`.
    [[nodiscard]] std::string request_body(const ChatRequest& request) const;

    using Sleep = std::function<void(std::chrono::milliseconds)>;
    void set_sleep(Sleep sleep) { sleep_ = std::move(sleep); }

private:
    LiveConfig config_;
    Transport transport_;
    Sleep sleep_;
    std::counting_semaphore<1024> slots_;
};

/// httplib transport for `base_url` + /chat/completions.
Transport http_transport(const LiveConfig& config);

// ---------------------------------------------------------------- scripted

/// Replies by substring rules. The rule whose key occurs latest in the last
/// message wins (longer keys break ties), so growing transcripts select the
/// reply for their newest part.
class ScriptedBackend : public Backend
{
public:
    struct Rule
    {
        std::string key;
        std::string response;
    };

    explicit ScriptedBackend(std::vector<Rule> rules);

    /// A JSON array of {"key": ..., "response": ...} objects.
    static std::vector<Rule> load_rules(const std::filesystem::path& path);

    std::string complete(const ChatRequest& request) override;

    [[nodiscard]] std::size_t calls() const;
    [[nodiscard]] std::vector<ChatRequest> requests() const;

private:
    std::vector<Rule> rules_;
    mutable std::mutex mutex_;
    std::vector<ChatRequest> requests_;
};

// ---------------------------------------------------------------- cassettes

/// Fingerprint -> response, in insertion order.
class Cassette
{
public:
    using Logger = std::function<void(const std::string&)>;

    [[nodiscard]] std::optional<std::string> find(const std::string& fingerprint) const;
    /// Last write wins; a replaced fingerprint is reported through the logger.
    void put(const std::string& fingerprint, std::string response, std::string note = {});
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> records() const;

    static std::shared_ptr<Cassette> load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    void set_logger(Logger logger) { logger_ = std::move(logger); }

    bool operator==(const Cassette& other) const { return records() == other.records(); }

private:
    struct Record
    {
        std::string fingerprint;
        std::string response;
        std::string note;
    };
    mutable std::mutex mutex_;
    std::vector<Record> records_;
    std::map<std::string, std::size_t> index_;
    Logger logger_;
};

enum class CassetteMode
{
    Replay,      // recorded responses only, never calls the inner backend
    Record,      // calls the inner backend and stores the response
    Passthrough, // inner backend only
};

class CassetteBackend : public Backend
{
public:
    CassetteBackend(std::shared_ptr<Cassette> cassette, CassetteMode mode, std::shared_ptr<Backend> inner = {});

    std::string complete(const ChatRequest& request) override;

    [[nodiscard]] const std::shared_ptr<Cassette>& cassette() const { return cassette_; }

private:
    std::shared_ptr<Cassette> cassette_;
    CassetteMode mode_;
    std::shared_ptr<Backend> inner_;
};

/// Counts the conversations passed through to `inner`.
class CountingBackend : public Backend
{
public:
    explicit CountingBackend(std::shared_ptr<Backend> inner): inner_(std::move(inner)) {}

    std::string complete(const ChatRequest& request) override;
    [[nodiscard]] std::size_t calls() const;

private:
    std::shared_ptr<Backend> inner_;
    mutable std::mutex mutex_;
    std::size_t calls_ = 0;
};

} // namespace deli::llm
