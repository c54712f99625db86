// Copyright 2026 The CaseGraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CASEGRAPH_STORAGE_H_
#define CASEGRAPH_STORAGE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "casegraph/annotation_io.h"
#include "casegraph/corpus_model.h"
#include "casegraph/index.h"

// File-backed document store.
//
//   <root>/manifest.json                 committed state, replaced atomically
//   <root>/docs/<id>.<version>.json      Document
//   <root>/anns/<id>.<version>.json      AnnotationSet (optional)
//   <root>/graphs/<id>.<version>.json    CaseGraph
//   <root>/snapshots/<timestamp>.idx     index snapshots
//
// Ids are percent-encoded in file names. Every file is written to a temporary
// name and renamed into place; the manifest is written last, so a crash at any
// point leaves the previous manifest and its files intact. Opening a store
// deletes temporary and unreferenced files.

namespace casegraph {

struct DocumentBundle {
  Document document;
  std::optional<AnnotationSet> annotations;
  CaseGraph graph;
  std::uint64_t version = 0;
  friend bool operator==(const DocumentBundle &, const DocumentBundle &) = default;
};

struct ManifestEntry {
  std::string title;
  std::string doc_file;    // relative to the store root
  std::string ann_file;    // empty when no annotations were stored
  std::string graph_file;
  std::uint64_t version = 0;
  friend bool operator==(const ManifestEntry &, const ManifestEntry &) = default;
};

struct DocumentSummary {
  std::string doc_id;
  std::string title;
  std::uint64_t version = 0;
};

struct DocumentPage {
  std::vector<DocumentSummary> items;
  std::size_t total = 0;
  std::size_t offset = 0;
  std::size_t limit = 0;
};

// Single writer, many readers.
class Store {
 public:
  // Creates the directory layout when missing and recovers from interrupted
  // writes. Throws Error(kIo) with the path on filesystem failures.
  explicit Store(std::filesystem::path root);

  // Returns the new version, one more than the last version ever stored for
  // this id (deleted documents keep counting).
  std::uint64_t Put(const Document &doc,
                    const std::optional<AnnotationSet> &annotations,
                    const CaseGraph &graph);
  // Throws Error(kNotFound).
  DocumentBundle Get(const std::string &doc_id) const;
  bool Contains(const std::string &doc_id) const;
  // Ordered by doc id.
  DocumentPage List(std::size_t offset, std::size_t limit) const;
  std::vector<std::string> Ids() const;
  std::size_t size() const;
  // Throws Error(kNotFound).
  void Delete(const std::string &doc_id);

  std::filesystem::path SnapshotIndexes(const InvertedIndex &inverted,
                                        const GraphIndex &graphs) const;
  // Most recent snapshot by file name, if any.
  std::optional<std::filesystem::path> LatestSnapshot() const;

  const std::filesystem::path &root() const { return root_; }
  std::map<std::string, ManifestEntry> manifest() const;

 private:
  void Recover();
  void WriteManifest() const;

  std::filesystem::path root_;
  mutable std::shared_mutex mu_;
  std::map<std::string, ManifestEntry> entries_;
  std::map<std::string, std::uint64_t> last_version_;
};

// Percent-encodes everything outside [A-Za-z0-9_-].
std::string EncodeFileId(const std::string &id);

// Writes `content` to a temporary sibling, flushes it and renames it over
// `path`. Throws Error(kIo).
void WriteFileAtomic(const std::filesystem::path &path,
                     const std::string &content);
// Throws Error(kIo), or Error(kNotFound) when the file does not exist.
std::string ReadFile(const std::filesystem::path &path);

// Snapshot file:
//   header   "CGSNAP01" | u32 format version | u32 section count | u32 crc
//   section  u32 tag | u64 length | payload | u32 crc of tag, length, payload
// Integers are little endian; payloads are CBOR. Any corruption or truncation
// raises Error(kChecksum); a valid header with another format version raises
// Error(kSchema).
inline constexpr std::uint32_t kSnapshotFormatVersion = 1;
std::string EncodeSnapshot(const InvertedIndex &inverted,
                           const GraphIndex &graphs);
std::pair<InvertedIndex, GraphIndex> DecodeSnapshot(const std::string &bytes);
void WriteSnapshot(const std::filesystem::path &path,
                   const InvertedIndex &inverted, const GraphIndex &graphs);
std::pair<InvertedIndex, GraphIndex> LoadIndexes(
    const std::filesystem::path &path);

}  // namespace casegraph

#endif  // CASEGRAPH_STORAGE_H_
