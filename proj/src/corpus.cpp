/*
 * Copyright 2026 The poslens authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "poslens/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

namespace poslens::corpus {

namespace {

bool contains_whitespace(std::string_view s) {
    return s.find_first_of(" \t\r\n\v\f") != std::string_view::npos;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

// Raw-field checks shared by both parsers. The lemma is inspected before
// lowercasing so an already-appended "_TAG" suffix (a re-ingested
// lemma_TAG corpus) is caught rather than silently double-keyed.
Token make_token(std::string_view form, std::string_view raw_lemma,
                 std::string_view tag, std::size_t line) {
    if (raw_lemma.empty()) throw ParseError(line, "empty lemma");
    if (tag.empty()) throw ParseError(line, "empty tag");
    if (contains_whitespace(raw_lemma))
        throw ParseError(line, "lemma contains whitespace: \"" +
                                   std::string(raw_lemma) + "\"");
    if (contains_whitespace(tag))
        throw ParseError(line, "tag contains whitespace: \"" +
                                   std::string(tag) + "\"");
    std::string suffix = "_" + std::string(tag);
    if (raw_lemma.size() > suffix.size() &&
        raw_lemma.substr(raw_lemma.size() - suffix.size()) == suffix)
        throw ParseError(line, "lemma \"" + std::string(raw_lemma) +
                                   "\" already carries the \"" + suffix +
                                   "\" tag suffix");
    return Token{std::string(form), ascii_lower(raw_lemma), std::string(tag)};
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
    });
}

}  // namespace

std::size_t TaggedCorpus::token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
}

const std::vector<std::string>& TagMap::universal_tags() {
    static const std::vector<std::string> tags = {
        "ADJ",  "ADP",  "ADV",   "AUX",   "CONJ", "DET",
        "INTJ", "NOUN", "NUM",   "PART",  "PRON", "PROPN",
        "SCONJ", "SYM", "VERB",  "X",     "PUNCT"};
    return tags;
}

bool TagMap::is_universal(std::string_view tag) {
    const auto& tags = universal_tags();
    return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

void TagMap::add(std::string source, std::string target) {
    if (!is_universal(target))
        throw ConfigError("tag map target \"" + target +
                          "\" is not a Universal tag");
    entries_[std::move(source)] = std::move(target);
}

const std::string* TagMap::lookup(const std::string& source) const {
    auto it = entries_.find(source);
    return it == entries_.end() ? nullptr : &it->second;
}

TagMap TagMap::identity() {
    TagMap map;
    for (const auto& tag : universal_tags()) map.add(tag, tag);
    return map;
}

TagMap TagMap::load_tsv(std::istream& in) {
    TagMap map;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_tabs(line);
        if (fields.size() != 2)
            throw ParseError(lineno, "tag map rows need exactly 2 columns, got " +
                                         std::to_string(fields.size()));
        if (fields[0].empty() || fields[1].empty())
            throw ParseError(lineno, "empty tag map field");
        try {
            map.add(std::string(fields[0]), std::string(fields[1]));
        } catch (const ConfigError& e) {
            throw ParseError(lineno, e.what());
        }
    }
    return map;
}

std::int32_t Vocabulary::find(std::string_view key) const {
    auto it = index.find(std::string(key));
    return it == index.end() ? -1 : it->second;
}

TaggedCorpus parse_vertical(std::istream& in, std::string source) {
    TaggedCorpus corpus;
    corpus.source = std::move(source);
    std::vector<Token> sentence;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) {
            if (!sentence.empty()) corpus.sentences.push_back(std::move(sentence));
            sentence.clear();
            continue;
        }
        auto fields = split_tabs(line);
        if (fields.size() != 3)
            throw ParseError(lineno, "expected 3 tab-separated fields, got " +
                                         std::to_string(fields.size()));
        sentence.push_back(make_token(fields[0], fields[1], fields[2], lineno));
    }
    if (!sentence.empty()) corpus.sentences.push_back(std::move(sentence));
    return corpus;
}

TaggedCorpus parse_conllu(std::istream& in, std::string source) {
    TaggedCorpus corpus;
    corpus.source = std::move(source);
    std::vector<Token> sentence;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) {
            if (!sentence.empty()) corpus.sentences.push_back(std::move(sentence));
            sentence.clear();
            continue;
        }
        if (line[0] == '#') continue;
        auto fields = split_tabs(line);
        if (fields.size() < 4)
            throw ParseError(lineno, "expected at least 4 CoNLL-U columns, got " +
                                         std::to_string(fields.size()));
        std::string_view id = fields[0];
        std::size_t dash = id.find('-');
        std::size_t dot = id.find('.');
        if (dash != std::string_view::npos) {
            // Multiword-token range: both halves must be integers.
            if (all_digits(id.substr(0, dash)) && all_digits(id.substr(dash + 1)))
                continue;
            throw ParseError(lineno, "malformed token ID \"" + std::string(id) + "\"");
        }
        if (dot != std::string_view::npos) {
            // Empty node.
            if (all_digits(id.substr(0, dot)) && all_digits(id.substr(dot + 1)))
                continue;
            throw ParseError(lineno, "malformed token ID \"" + std::string(id) + "\"");
        }
        if (!all_digits(id))
            throw ParseError(lineno, "non-integer token ID \"" + std::string(id) + "\"");
        sentence.push_back(make_token(fields[1], fields[2], fields[3], lineno));
    }
    if (!sentence.empty()) corpus.sentences.push_back(std::move(sentence));
    return corpus;
}

void serialize_vertical(const TaggedCorpus& corpus, std::ostream& out) {
    for (const auto& sentence : corpus.sentences) {
        for (const auto& tok : sentence)
            out << tok.form << '\t' << tok.lemma << '\t' << tok.tag << '\n';
        out << '\n';
    }
}

TaggedCorpus apply_tag_map(const TaggedCorpus& corpus, const TagMap& map) {
    TaggedCorpus out;
    out.source = corpus.source;
    out.sentences.reserve(corpus.sentences.size());
    std::size_t sent_no = 0;
    for (const auto& sentence : corpus.sentences) {
        ++sent_no;
        std::vector<Token> mapped;
        mapped.reserve(sentence.size());
        std::size_t tok_no = 0;
        for (const auto& tok : sentence) {
            ++tok_no;
            const std::string* target = map.lookup(tok.tag);
            if (!target)
                throw ConfigError("unmapped tag \"" + tok.tag +
                                  "\" (first at sentence " +
                                  std::to_string(sent_no) + ", token " +
                                  std::to_string(tok_no) + ", lemma \"" +
                                  tok.lemma + "\")");
            mapped.push_back(Token{tok.form, tok.lemma, *target});
        }
        out.sentences.push_back(std::move(mapped));
    }
    return out;
}

std::string make_key(std::string_view lemma, std::string_view tag) {
    std::string key;
    key.reserve(lemma.size() + tag.size() + 1);
    for (char c : lemma) {
        key.push_back(c);
        if (c == '_') key.push_back('_');  // escape: "_" -> "__"
    }
    key.push_back('_');
    key.append(tag);
    return key;
}

std::pair<std::string, std::string> split_key(std::string_view key) {
    std::size_t sep = key.rfind('_');
    if (sep == std::string_view::npos || sep == 0 || sep + 1 == key.size())
        throw ConfigError("not a lemma_TAG key: \"" + std::string(key) + "\"");
    std::string_view escaped = key.substr(0, sep);
    std::string lemma;
    lemma.reserve(escaped.size());
    for (std::size_t i = 0; i < escaped.size(); ++i) {
        lemma.push_back(escaped[i]);
        if (escaped[i] == '_') {
            if (i + 1 >= escaped.size() || escaped[i + 1] != '_')
                throw ConfigError("unescaped separator in key: \"" +
                                  std::string(key) + "\"");
            ++i;
        }
    }
    return {std::move(lemma), std::string(key.substr(sep + 1))};
}

TokenStream to_token_stream(const TaggedCorpus& corpus, StreamMode mode) {
    TokenStream stream;
    stream.reserve(corpus.sentences.size());
    for (const auto& sentence : corpus.sentences) {
        std::vector<std::string> keys;
        keys.reserve(sentence.size());
        for (const auto& tok : sentence) {
            if (!TagMap::is_universal(tok.tag))
                throw ConfigError("non-Universal tag \"" + tok.tag +
                                  "\" in token stream input; apply a tag map first");
            if (tok.tag == "PUNCT") continue;
            keys.push_back(mode == StreamMode::lemma_tag
                               ? make_key(tok.lemma, tok.tag)
                               : tok.lemma);
        }
        if (!keys.empty()) stream.push_back(std::move(keys));
    }
    return stream;
}

Vocabulary build_vocabulary(const TokenStream& stream, std::int64_t min_count) {
    if (min_count < 1) throw ConfigError("min_count must be >= 1");
    std::unordered_map<std::string, std::int64_t> counts;
    std::int64_t total = 0;
    for (const auto& sentence : stream) {
        for (const auto& key : sentence) {
            ++counts[key];
            ++total;
        }
    }
    std::vector<std::pair<std::string, std::int64_t>> retained;
    retained.reserve(counts.size());
    for (auto& [key, freq] : counts)
        if (freq >= min_count) retained.emplace_back(key, freq);
    std::sort(retained.begin(), retained.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    Vocabulary vocab;
    vocab.total_tokens = total;
    vocab.keys.reserve(retained.size());
    vocab.freqs.reserve(retained.size());
    for (std::size_t i = 0; i < retained.size(); ++i) {
        vocab.keys.push_back(retained[i].first);
        vocab.freqs.push_back(retained[i].second);
        vocab.index.emplace(retained[i].first, static_cast<std::int32_t>(i));
    }
    return vocab;
}

std::vector<std::string> top_frequent(const Vocabulary& vocab, std::size_t n) {
    n = std::min(n, vocab.size());
    return {vocab.keys.begin(), vocab.keys.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::vector<std::string> frequency_band(const Vocabulary& vocab,
                                        std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw ConfigError("frequency band requires lo <= hi");
    std::vector<std::string> keys;
    for (std::size_t i = 0; i < vocab.size(); ++i)
        if (vocab.freqs[i] >= lo && vocab.freqs[i] <= hi)
            keys.push_back(vocab.keys[i]);
    return keys;  // index order is already descending frequency
}

void save_vocabulary(const Vocabulary& vocab, std::ostream& out) {
    for (std::size_t i = 0; i < vocab.size(); ++i)
        out << vocab.keys[i] << '\t' << vocab.freqs[i] << '\n';
}

Vocabulary load_vocabulary(std::istream& in) {
    Vocabulary vocab;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (fields.size() != 2)
            throw ParseError(lineno, "vocabulary rows need 2 columns");
        std::int64_t freq = 0;
        auto [ptr, ec] = std::from_chars(fields[1].data(),
                                         fields[1].data() + fields[1].size(), freq);
        if (ec != std::errc() || ptr != fields[1].data() + fields[1].size())
            throw ParseError(lineno, "bad frequency \"" + std::string(fields[1]) + "\"");
        if (vocab.index.contains(std::string(fields[0])))
            throw ParseError(lineno, "duplicate key \"" + std::string(fields[0]) + "\"");
        vocab.index.emplace(std::string(fields[0]),
                            static_cast<std::int32_t>(vocab.keys.size()));
        vocab.keys.emplace_back(fields[0]);
        vocab.freqs.push_back(freq);
        vocab.total_tokens += freq;
    }
    return vocab;
}

}  // namespace poslens::corpus
