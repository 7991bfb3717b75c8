// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace deli::retrieval
{

struct Entry
{
    std::string id;
    std::string problem;
    std::string solution;

    bool operator==(const Entry&) const = default;
};

/// Control sequences (\frac), numbers, lower-cased words and single math
/// symbols become tokens. Sentence punctuation and $ are dropped; other
/// non-ASCII code points become one token each.
std::vector<std::string> tokenize(std::string_view text);

class EmptyCorpus : public std::invalid_argument
{
public:
    EmptyCorpus(): std::invalid_argument("the retrieval corpus has no entries") {}
};

struct Posting
{
    std::uint32_t doc;
    std::uint32_t tf;

    bool operator==(const Posting&) const = default;
};

/// Inverted index over entry problems. Documents are numbered in entry order.
class Corpus
{
public:
    static Corpus index(std::vector<Entry> entries);

    [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] const std::map<std::string, std::vector<Posting>>& postings() const { return postings_; }
    [[nodiscard]] const std::vector<std::uint32_t>& lengths() const { return lengths_; }
    [[nodiscard]] double average_length() const { return average_length_; }

    /// SHA-256 (hex) over ids, problems and solutions.
    [[nodiscard]] const std::string& content_hash() const { return hash_; }

    void save_cache(const std::filesystem::path& path) const;
    /// Index for `entries` from `path` if the stored hash matches, else built
    /// fresh and written back.
    static Corpus load_or_index(std::vector<Entry> entries, const std::filesystem::path& cache_dir);

private:
    std::vector<Entry> entries_;
    std::map<std::string, std::vector<Posting>> postings_;
    std::vector<std::uint32_t> lengths_;
    double average_length_ = 0;
    std::string hash_;
};

std::string sha256_hex(std::string_view data);

/// Relevance of every document to a tokenized query.
class Scorer
{
public:
    virtual ~Scorer() = default;
    [[nodiscard]] virtual std::vector<double> score(const Corpus& corpus,
                                                    const std::vector<std::string>& query) const = 0;
};

class Bm25 : public Scorer
{
public:
    explicit Bm25(double k1 = 1.5, double b = 0.75): k1_(k1), b_(b) {}

    /// Sum over query tokens of idf * tf (k1 + 1) / (tf + k1 (1 - b + b |d| / avgdl)),
    /// idf = ln(1 + (N - n + 0.5) / (n + 0.5)).
    [[nodiscard]] std::vector<double> score(const Corpus& corpus,
                                            const std::vector<std::string>& query) const override;

private:
    double k1_;
    double b_;
};

struct Hit
{
    std::size_t doc;
    double score;
    const Entry* entry;
};

/// min(k, size) entries by descending score, ties by document number.
std::vector<Hit> top_k(const Corpus& corpus, std::string_view query, std::size_t k,
                       const Scorer& scorer = Bm25());

} // namespace deli::retrieval
