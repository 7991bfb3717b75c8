// SPDX-License-Identifier: Apache-2.0
#include <deli/retrieval.hpp>

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>

namespace deli::retrieval
{

std::vector<std::string> tokenize(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    auto is_alpha = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; };
    auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
    while (i < text.size())
    {
        char c = text[i];
        auto u = static_cast<unsigned char>(c);
        if (std::isspace(u) || c == '$')
        {
            ++i;
            continue;
        }
        if (c == '\\' && i + 1 < text.size() && is_alpha(text[i + 1]))
        {
            std::size_t j = i + 1;
            while (j < text.size() && is_alpha(text[j]))
                ++j;
            out.emplace_back(text.substr(i, j - i));
            i = j;
            continue;
        }
        if (is_digit(c))
        {
            std::size_t j = i;
            while (j < text.size() && is_digit(text[j]))
                ++j;
            if (j + 1 < text.size() && text[j] == '.' && is_digit(text[j + 1]))
            {
                ++j;
                while (j < text.size() && is_digit(text[j]))
                    ++j;
            }
            out.emplace_back(text.substr(i, j - i));
            i = j;
            continue;
        }
        if (is_alpha(c))
        {
            std::size_t j = i;
            std::string word;
            while (j < text.size() && is_alpha(text[j]))
                word += static_cast<char>(std::tolower(static_cast<unsigned char>(text[j++])));
            out.push_back(std::move(word));
            i = j;
            continue;
        }
        if (u >= 0x80)
        {
            // one UTF-8 code point
            std::size_t len = u >= 0xF0 ? 4 : u >= 0xE0 ? 3 : u >= 0xC0 ? 2 : 1;
            out.emplace_back(text.substr(i, std::min(len, text.size() - i)));
            i += len;
            continue;
        }
        static constexpr std::string_view punctuation = ",.;:?!\"'`";
        if (punctuation.find(c) == std::string_view::npos)
            out.emplace_back(1, c);
        ++i;
    }
    return out;
}

std::string sha256_hex(std::string_view data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i)
    {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

namespace
{

std::string hash_entries(const std::vector<Entry>& entries)
{
    std::string buf;
    for (const auto& e: entries)
        for (const std::string* s: {&e.id, &e.problem, &e.solution})
        {
            buf += std::to_string(s->size());
            buf += ':';
            buf += *s;
        }
    return sha256_hex(buf);
}

constexpr char magic[8] = {'D', 'E', 'L', 'I', 'B', 'M', '2', '5'};
constexpr std::uint32_t cache_version = 1;

template<class T>
void put(std::ostream& out, T v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template<class T>
bool get(std::istream& in, T& v)
{
    return static_cast<bool>(in.read(reinterpret_cast<char*>(&v), sizeof v));
}

void put_string(std::ostream& out, const std::string& s)
{
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

bool get_string(std::istream& in, std::string& s)
{
    std::uint32_t n = 0;
    if (!get(in, n) || n > (1u << 28))
        return false;
    s.resize(n);
    return static_cast<bool>(in.read(s.data(), n));
}

} // namespace

Corpus Corpus::index(std::vector<Entry> entries)
{
    if (entries.empty())
        throw EmptyCorpus();
    Corpus c;
    c.hash_ = hash_entries(entries);
    c.entries_ = std::move(entries);
    std::uint64_t total = 0;
    for (std::size_t d = 0; d < c.entries_.size(); ++d)
    {
        auto tokens = tokenize(c.entries_[d].problem);
        c.lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
        total += tokens.size();
        std::map<std::string, std::uint32_t> tf;
        for (auto& t: tokens)
            ++tf[t];
        for (auto& [term, n]: tf)
            c.postings_[term].push_back({static_cast<std::uint32_t>(d), n});
    }
    c.average_length_ = static_cast<double>(total) / static_cast<double>(c.entries_.size());
    return c;
}

void Corpus::save_cache(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write index cache " + path.string());
    out.write(magic, sizeof magic);
    put(out, cache_version);
    put_string(out, hash_);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(lengths_.size()));
    for (auto l: lengths_)
        put(out, l);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(postings_.size()));
    for (const auto& [term, list]: postings_)
    {
        put_string(out, term);
        put<std::uint32_t>(out, static_cast<std::uint32_t>(list.size()));
        for (const auto& p: list)
        {
            put(out, p.doc);
            put(out, p.tf);
        }
    }
}

Corpus Corpus::load_or_index(std::vector<Entry> entries, const std::filesystem::path& cache_dir)
{
    if (entries.empty())
        throw EmptyCorpus();
    std::string hash = hash_entries(entries);
    auto path = cache_dir / ("bm25-" + hash + ".bin");
    std::ifstream in(path, std::ios::binary);
    if (in)
    {
        Corpus c;
        char head[sizeof magic];
        std::uint32_t version = 0, docs = 0, terms = 0;
        bool ok = in.read(head, sizeof head) && std::equal(head, head + sizeof head, magic) && get(in, version) &&
                  version == cache_version && get_string(in, c.hash_) && c.hash_ == hash && get(in, docs) &&
                  docs == entries.size();
        for (std::uint32_t d = 0; ok && d < docs; ++d)
        {
            std::uint32_t l = 0;
            ok = get(in, l);
            c.lengths_.push_back(l);
        }
        ok = ok && get(in, terms);
        for (std::uint32_t t = 0; ok && t < terms; ++t)
        {
            std::string term;
            std::uint32_t n = 0;
            ok = get_string(in, term) && get(in, n);
            auto& list = c.postings_[term];
            for (std::uint32_t k = 0; ok && k < n; ++k)
            {
                Posting p {};
                ok = get(in, p.doc) && get(in, p.tf) && p.doc < docs;
                list.push_back(p);
            }
        }
        if (ok)
        {
            c.entries_ = std::move(entries);
            double total = std::accumulate(c.lengths_.begin(), c.lengths_.end(), 0.0);
            c.average_length_ = total / static_cast<double>(docs);
            return c;
        }
    }
    Corpus c = index(std::move(entries));
    std::error_code ec;
    std::filesystem::create_directories(cache_dir, ec);
    c.save_cache(path);
    return c;
}

std::vector<double> Bm25::score(const Corpus& corpus, const std::vector<std::string>& query) const
{
    const double n_docs = static_cast<double>(corpus.size());
    const double avg = corpus.average_length() > 0 ? corpus.average_length() : 1.0;
    std::vector<double> scores(corpus.size(), 0.0);
    for (const auto& term: query)
    {
        auto it = corpus.postings().find(term);
        if (it == corpus.postings().end())
            continue;
        const double n = static_cast<double>(it->second.size());
        const double idf = std::log(1.0 + (n_docs - n + 0.5) / (n + 0.5));
        for (const auto& p: it->second)
        {
            const double tf = p.tf;
            const double len = corpus.lengths()[p.doc];
            scores[p.doc] += idf * tf * (k1_ + 1) / (tf + k1_ * (1 - b_ + b_ * len / avg));
        }
    }
    return scores;
}

std::vector<Hit> top_k(const Corpus& corpus, std::string_view query, std::size_t k, const Scorer& scorer)
{
    if (corpus.size() == 0)
        throw EmptyCorpus();
    if (k == 0)
        throw std::invalid_argument("top_k needs k >= 1");
    auto scores = scorer.score(corpus, tokenize(query));
    std::vector<std::size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    order.resize(std::min(k, order.size()));
    std::vector<Hit> out;
    for (auto d: order)
        out.push_back({d, scores[d], &corpus.entries()[d]});
    return out;
}

} // namespace deli::retrieval
