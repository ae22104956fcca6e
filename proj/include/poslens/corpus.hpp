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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "poslens/common.hpp"

namespace poslens::corpus {

struct Token {
    std::string form;
    std::string lemma;  // lowercased at ingestion
    std::string tag;
};

struct TaggedCorpus {
    std::vector<std::vector<Token>> sentences;  // no empty sentences
    std::string source;

    std::size_t token_count() const;
};

/// Source-tagset to Universal-tagset association table. Targets are
/// restricted to the 16 Universal tags plus PUNCT (admitted here so it can
/// be excluded downstream).
class TagMap {
public:
    static const std::vector<std::string>& universal_tags();
    static bool is_universal(std::string_view tag);

    /// Throws ConfigError when target is not an admissible Universal tag.
    void add(std::string source, std::string target);

    const std::string* lookup(const std::string& source) const;
    std::size_t size() const { return entries_.size(); }
    const std::map<std::string, std::string>& entries() const { return entries_; }

    /// Identity map over the Universal tags themselves.
    static TagMap identity();

    /// Two-column TSV "source TAB universal"; "#" starts a comment line.
    static TagMap load_tsv(std::istream& in);

private:
    std::map<std::string, std::string> entries_;
};

struct Vocabulary {
    std::vector<std::string> keys;       // index -> key, dense 0..N-1
    std::vector<std::int64_t> freqs;     // index -> retained frequency
    std::unordered_map<std::string, std::int32_t> index;
    std::int64_t total_tokens = 0;       // pre-filter token count

    std::size_t size() const { return keys.size(); }

    /// Index of key, or -1 when absent.
    std::int32_t find(std::string_view key) const;
};

enum class StreamMode { lemma_tag, lemma };

/// Per-sentence word-key streams, the trainer's input.
using TokenStream = std::vector<std::vector<std::string>>;

/// "form TAB lemma TAB tag" lines, blank line ends a sentence. A trailing
/// unterminated sentence is kept.
TaggedCorpus parse_vertical(std::istream& in, std::string source = "");

/// CoNLL-U subset: columns ID/FORM/LEMMA/UPOS. Multiword-token ranges
/// ("1-2") and empty nodes ("1.1") are skipped; "#" lines are comments.
TaggedCorpus parse_conllu(std::istream& in, std::string source = "");

void serialize_vertical(const TaggedCorpus& corpus, std::ostream& out);

/// Replaces every tag through the map. Throws ConfigError naming the tag
/// and its first occurrence when a tag is unmapped.
TaggedCorpus apply_tag_map(const TaggedCorpus& corpus, const TagMap& map);

/// lemma_TAG key. Underscores inside the lemma are doubled first, so the
/// final single "_" before the tag stays unambiguous.
std::string make_key(std::string_view lemma, std::string_view tag);

/// Inverse of make_key. Throws ConfigError on keys without a separator.
std::pair<std::string, std::string> split_key(std::string_view key);

/// Emits word keys per sentence; PUNCT tokens are dropped in both modes.
/// Requires Universal tags throughout.
TokenStream to_token_stream(const TaggedCorpus& corpus, StreamMode mode);

/// Keeps keys with frequency >= min_count. Indices run by descending
/// frequency, ties broken lexicographically. total_tokens is the pre-filter
/// token count.
Vocabulary build_vocabulary(const TokenStream& stream, std::int64_t min_count);

/// The n highest-frequency keys (all keys when n exceeds the vocabulary).
std::vector<std::string> top_frequent(const Vocabulary& vocab, std::size_t n);

/// Keys with lo <= freq <= hi, sorted by descending frequency.
std::vector<std::string> frequency_band(const Vocabulary& vocab,
                                        std::int64_t lo, std::int64_t hi);

/// "key TAB frequency" rows in index order.
void save_vocabulary(const Vocabulary& vocab, std::ostream& out);
Vocabulary load_vocabulary(std::istream& in);

}  // namespace poslens::corpus
