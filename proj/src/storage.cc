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

#include "casegraph/storage.h"

#include <fcntl.h>
#include <unistd.h>
#include <zlib.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "casegraph/error.h"
#include "casegraph/json_codec.h"

namespace casegraph {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'C', 'G', 'S', 'N', 'A', 'P', '0', '1'};
constexpr std::uint32_t kInvertedSection = 1;
constexpr std::uint32_t kGraphSection = 2;
constexpr int kManifestFormat = 1;

[[noreturn]] void ThrowIo(const std::string &what, const fs::path &path) {
  throw Error(ErrorKind::kIo,
              what + " " + path.string() + ": " + std::strerror(errno),
              {{"path", path.string()}});
}

void Fsync(const fs::path &path, int flags) {
  int fd = ::open(path.c_str(), flags);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

std::uint32_t Crc(const std::string &bytes, std::size_t from, std::size_t len) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef *>(bytes.data() + from),
            static_cast<uInt>(len)));
}

void PutU32(std::string *out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void PutU64(std::string *out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Bounds-checked little-endian reader; running off the end means truncation.
class Reader {
 public:
  explicit Reader(const std::string &bytes) : bytes_(bytes) {}
  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == bytes_.size(); }
  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorKind::kChecksum, "snapshot is truncated",
                  {{"offset", pos_}});
    }
  }
  std::uint64_t Uint(int width) {
    Need(width);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += width;
    return v;
  }
  void Skip(std::size_t n) {
    Need(n);
    pos_ += n;
  }

 private:
  const std::string &bytes_;
  std::size_t pos_ = 0;
};

Json ConfigToJson(const AnalyzerConfig &c) {
  return {{"minGram", c.min_gram},
          {"maxGram", c.max_gram},
          {"stopWords", c.stop_words},
          {"stemmer", c.stemmer == Stemmer::kEnglishSnowball ? "english" : "none"},
          {"foldAscii", c.fold_ascii},
          {"lowercase", c.lowercase}};
}

AnalyzerConfig ConfigFromJson(const Json &j) {
  AnalyzerConfig c;
  c.min_gram = j.at("minGram").get<int>();
  c.max_gram = j.at("maxGram").get<int>();
  c.stop_words = j.at("stopWords").get<std::set<std::string>>();
  c.stemmer = j.at("stemmer").get<std::string>() == "english"
                  ? Stemmer::kEnglishSnowball
                  : Stemmer::kNone;
  c.fold_ascii = j.at("foldAscii").get<bool>();
  c.lowercase = j.at("lowercase").get<bool>();
  return c;
}

Json InvertedToJson(const InvertedIndex &index) {
  Json postings = Json::object();
  for (const auto &[token, list] : index.postings()) {
    Json items = Json::array();
    for (const Posting &p : list) items.push_back(Json::array({p.doc_id, p.tf}));
    postings[token] = std::move(items);
  }
  return {{"config", ConfigToJson(index.config())},
          {"postings", postings},
          {"docLengths", index.doc_lengths()}};
}

InvertedIndex InvertedFromJson(const Json &j) {
  std::map<std::string, std::vector<Posting>> postings;
  for (const auto &[token, items] : j.at("postings").items()) {
    std::vector<Posting> &list = postings[token];
    for (const Json &p : items) {
      list.push_back({p.at(0).get<std::string>(), p.at(1).get<std::uint32_t>()});
    }
  }
  return InvertedIndex::FromParts(
      ConfigFromJson(j.at("config")), std::move(postings),
      j.at("docLengths").get<std::map<std::string, std::size_t>>());
}

Json GraphsToJson(const GraphIndex &index) {
  Json graphs = Json::object(), closures = Json::object();
  for (const auto &[doc_id, graph] : index.graphs()) graphs[doc_id] = ToJson(graph);
  for (const auto &[doc_id, c] : index.closures()) {
    closures[doc_id] = {{"nodes", c.nodes},
                        {"before", c.before},
                        {"overlap", c.overlap},
                        {"inconsistent", c.marked_inconsistent}};
  }
  return {{"graphs", graphs}, {"closures", closures}};
}

GraphIndex GraphsFromJson(const Json &j) {
  std::map<std::string, CaseGraph> graphs;
  std::map<std::string, temporal::TemporalGraph> closures;
  for (const auto &[doc_id, g] : j.at("graphs").items()) {
    graphs[doc_id] = CaseGraphFromJson(g);
  }
  for (const auto &[doc_id, c] : j.at("closures").items()) {
    temporal::TemporalGraph t;
    t.nodes = c.at("nodes").get<std::set<std::string>>();
    t.before = c.at("before").get<std::set<temporal::NodePair>>();
    t.overlap = c.at("overlap").get<std::set<temporal::NodePair>>();
    t.marked_inconsistent = c.at("inconsistent").get<bool>();
    closures[doc_id] = std::move(t);
  }
  return GraphIndex::FromParts(std::move(graphs), std::move(closures));
}

void AppendSection(std::string *out, std::uint32_t tag, const Json &payload) {
  std::vector<std::uint8_t> cbor = Json::to_cbor(payload);
  std::size_t start = out->size();
  PutU32(out, tag);
  PutU64(out, cbor.size());
  out->append(reinterpret_cast<const char *>(cbor.data()), cbor.size());
  PutU32(out, Crc(*out, start, out->size() - start));
}

std::string ManifestFileName(const std::string &dir, const std::string &id,
                             std::uint64_t version) {
  return dir + "/" + EncodeFileId(id) + "." + std::to_string(version) + ".json";
}

}  // namespace

std::string EncodeFileId(const std::string &id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : id) {
    if (std::isalnum(c) || c == '_' || c == '-') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

void WriteFileAtomic(const fs::path &path, const std::string &content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) ThrowIo("cannot create", tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) ThrowIo("cannot write", tmp);
  }
  Fsync(tmp, O_RDONLY);
  if (std::rename(tmp.c_str(), path.c_str()) != 0) ThrowIo("cannot rename", tmp);
  Fsync(path.parent_path().empty() ? fs::path(".") : path.parent_path(),
        O_RDONLY | O_DIRECTORY);
}

std::string ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!fs::exists(path)) {
      throw Error(ErrorKind::kNotFound, "no such file " + path.string(),
                  {{"path", path.string()}});
    }
    ThrowIo("cannot open", path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string EncodeSnapshot(const InvertedIndex &inverted,
                           const GraphIndex &graphs) {
  std::string out(kMagic, sizeof(kMagic));
  PutU32(&out, kSnapshotFormatVersion);
  PutU32(&out, 2);
  PutU32(&out, Crc(out, 0, out.size()));
  AppendSection(&out, kInvertedSection, InvertedToJson(inverted));
  AppendSection(&out, kGraphSection, GraphsToJson(graphs));
  return out;
}

std::pair<InvertedIndex, GraphIndex> DecodeSnapshot(const std::string &bytes) {
  Reader r(bytes);
  r.Skip(sizeof(kMagic));
  std::uint64_t version = r.Uint(4);
  std::uint64_t count = r.Uint(4);
  std::uint64_t header_crc = r.Uint(4);
  if (Crc(bytes, 0, sizeof(kMagic) + 8) != header_crc) {
    throw Error(ErrorKind::kChecksum, "snapshot header checksum mismatch");
  }
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorKind::kSchema, "not an index snapshot");
  }
  if (version != kSnapshotFormatVersion) {
    throw Error(ErrorKind::kSchema,
                "unsupported snapshot format version " + std::to_string(version),
                {{"version", version}, {"supported", kSnapshotFormatVersion}});
  }

  std::map<std::uint32_t, Json> sections;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::size_t start = r.pos();
    auto tag = static_cast<std::uint32_t>(r.Uint(4));
    std::uint64_t length = r.Uint(8);
    r.Need(length);
    std::size_t payload = r.pos();
    r.Skip(length);
    std::size_t end = r.pos();
    std::uint64_t crc = r.Uint(4);
    if (Crc(bytes, start, end - start) != crc) {
      throw Error(ErrorKind::kChecksum,
                  "snapshot section " + std::to_string(tag) + " checksum mismatch",
                  {{"offset", start}});
    }
    try {
      sections[tag] = Json::from_cbor(bytes.begin() + payload, bytes.begin() + end);
    } catch (const Json::exception &e) {
      throw Error(ErrorKind::kChecksum,
                  std::string("undecodable snapshot section: ") + e.what());
    }
  }
  if (!r.done()) {
    throw Error(ErrorKind::kChecksum, "trailing bytes after snapshot sections",
                {{"offset", r.pos()}});
  }
  if (!sections.count(kInvertedSection) || !sections.count(kGraphSection)) {
    throw Error(ErrorKind::kChecksum, "snapshot is missing sections");
  }
  try {
    return {InvertedFromJson(sections[kInvertedSection]),
            GraphsFromJson(sections[kGraphSection])};
  } catch (const Json::exception &e) {
    throw Error(ErrorKind::kSchema, std::string("malformed snapshot content: ") + e.what());
  }
}

void WriteSnapshot(const fs::path &path, const InvertedIndex &inverted,
                   const GraphIndex &graphs) {
  WriteFileAtomic(path, EncodeSnapshot(inverted, graphs));
}

std::pair<InvertedIndex, GraphIndex> LoadIndexes(const fs::path &path) {
  return DecodeSnapshot(ReadFile(path));
}

Store::Store(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  for (const char *dir : {"", "docs", "anns", "graphs", "snapshots"}) {
    fs::create_directories(root_ / dir, ec);
    if (ec) {
      throw Error(ErrorKind::kIo,
                  "cannot create " + (root_ / dir).string() + ": " + ec.message(),
                  {{"path", (root_ / dir).string()}});
    }
  }
  Recover();
}

void Store::Recover() {
  fs::path manifest_path = root_ / "manifest.json";
  if (fs::exists(manifest_path)) {
    Json j;
    try {
      j = Json::parse(ReadFile(manifest_path));
    } catch (const Json::exception &e) {
      throw Error(ErrorKind::kIo,
                  "corrupt manifest " + manifest_path.string() + ": " + e.what(),
                  {{"path", manifest_path.string()}});
    }
    for (const auto &[id, e] : j.at("documents").items()) {
      ManifestEntry entry;
      entry.title = e.value("title", "");
      entry.doc_file = e.at("docFile").get<std::string>();
      entry.ann_file = e.value("annFile", "");
      entry.graph_file = e.at("graphFile").get<std::string>();
      entry.version = e.at("version").get<std::uint64_t>();
      bool complete = fs::exists(root_ / entry.doc_file) &&
                      fs::exists(root_ / entry.graph_file) &&
                      (entry.ann_file.empty() || fs::exists(root_ / entry.ann_file));
      if (complete) entries_[id] = entry;
      last_version_[id] = entry.version;
    }
    if (j.contains("lastVersions")) {
      for (const auto &[id, v] : j["lastVersions"].items()) {
        last_version_[id] = std::max(last_version_[id], v.get<std::uint64_t>());
      }
    }
  }

  // Drop temporaries and files the committed manifest does not reference.
  std::set<fs::path> referenced;
  for (const auto &[id, e] : entries_) {
    referenced.insert(root_ / e.doc_file);
    referenced.insert(root_ / e.graph_file);
    if (!e.ann_file.empty()) referenced.insert(root_ / e.ann_file);
  }
  for (const char *dir : {"docs", "anns", "graphs", "snapshots", ""}) {
    for (const auto &file : fs::directory_iterator(root_ / dir)) {
      if (!file.is_regular_file()) continue;
      const fs::path &p = file.path();
      bool tmp = p.extension() == ".tmp";
      bool orphan = std::string(dir) != "snapshots" && std::string(dir) != "" &&
                    !referenced.count(p);
      if (tmp || orphan) fs::remove(p);
    }
  }
}

void Store::WriteManifest() const {
  Json documents = Json::object();
  for (const auto &[id, e] : entries_) {
    Json j = {{"title", e.title},
              {"docFile", e.doc_file},
              {"graphFile", e.graph_file},
              {"version", e.version}};
    if (!e.ann_file.empty()) j["annFile"] = e.ann_file;
    documents[id] = std::move(j);
  }
  Json manifest = {{"format", kManifestFormat},
                   {"documents", documents},
                   {"lastVersions", last_version_}};
  WriteFileAtomic(root_ / "manifest.json", manifest.dump(2) + "\n");
}

std::uint64_t Store::Put(const Document &doc,
                         const std::optional<AnnotationSet> &annotations,
                         const CaseGraph &graph) {
  if (doc.doc_id.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "document id must not be empty");
  }
  std::unique_lock lock(mu_);
  ManifestEntry entry;
  entry.title = doc.title;
  entry.version = last_version_[doc.doc_id] + 1;
  entry.doc_file = ManifestFileName("docs", doc.doc_id, entry.version);
  entry.graph_file = ManifestFileName("graphs", doc.doc_id, entry.version);
  WriteFileAtomic(root_ / entry.doc_file, ToJson(doc).dump());
  if (annotations) {
    entry.ann_file = ManifestFileName("anns", doc.doc_id, entry.version);
    WriteFileAtomic(root_ / entry.ann_file, ToJson(*annotations).dump());
  }
  WriteFileAtomic(root_ / entry.graph_file, ToJson(graph).dump());

  std::optional<ManifestEntry> previous;
  if (auto it = entries_.find(doc.doc_id); it != entries_.end()) previous = it->second;
  entries_[doc.doc_id] = entry;
  last_version_[doc.doc_id] = entry.version;
  try {
    WriteManifest();
  } catch (...) {
    if (previous) entries_[doc.doc_id] = *previous;
    else entries_.erase(doc.doc_id);
    last_version_[doc.doc_id] = entry.version - 1;
    throw;
  }
  if (previous) {
    std::error_code ec;
    for (const std::string *f : {&previous->doc_file, &previous->ann_file,
                                 &previous->graph_file}) {
      if (!f->empty()) fs::remove(root_ / *f, ec);
    }
  }
  return entry.version;
}

DocumentBundle Store::Get(const std::string &doc_id) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(doc_id);
  if (it == entries_.end()) {
    throw Error(ErrorKind::kNotFound, "unknown document " + doc_id,
                {{"docId", doc_id}});
  }
  const ManifestEntry &e = it->second;
  DocumentBundle bundle;
  bundle.version = e.version;
  try {
    bundle.document = DocumentFromJson(ParseJson(ReadFile(root_ / e.doc_file)));
    bundle.graph = CaseGraphFromJson(ParseJson(ReadFile(root_ / e.graph_file)));
    if (!e.ann_file.empty()) {
      bundle.annotations =
          AnnotationSetFromJson(ParseJson(ReadFile(root_ / e.ann_file)));
    }
  } catch (const Error &err) {
    throw Error(ErrorKind::kIo,
                "stored record for " + doc_id + " is unreadable: " + err.what(),
                {{"docId", doc_id}});
  }
  return bundle;
}

bool Store::Contains(const std::string &doc_id) const {
  std::shared_lock lock(mu_);
  return entries_.count(doc_id) > 0;
}

DocumentPage Store::List(std::size_t offset, std::size_t limit) const {
  std::shared_lock lock(mu_);
  DocumentPage page;
  page.total = entries_.size();
  page.offset = offset;
  page.limit = limit;
  std::size_t i = 0;
  for (const auto &[id, e] : entries_) {
    if (i++ < offset) continue;
    if (page.items.size() >= limit) break;
    page.items.push_back({id, e.title, e.version});
  }
  return page;
}

std::vector<std::string> Store::Ids() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> ids;
  for (const auto &[id, e] : entries_) ids.push_back(id);
  return ids;
}

std::size_t Store::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

void Store::Delete(const std::string &doc_id) {
  std::unique_lock lock(mu_);
  auto it = entries_.find(doc_id);
  if (it == entries_.end()) {
    throw Error(ErrorKind::kNotFound, "unknown document " + doc_id,
                {{"docId", doc_id}});
  }
  ManifestEntry removed = it->second;
  entries_.erase(it);
  try {
    WriteManifest();
  } catch (...) {
    entries_[doc_id] = removed;
    throw;
  }
  std::error_code ec;
  for (const std::string *f : {&removed.doc_file, &removed.ann_file, &removed.graph_file}) {
    if (!f->empty()) fs::remove(root_ / *f, ec);
  }
}

fs::path Store::SnapshotIndexes(const InvertedIndex &inverted,
                                const GraphIndex &graphs) const {
  auto now = std::chrono::system_clock::now().time_since_epoch();
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(now).count();
  std::string stamp = std::to_string(micros);
  stamp.insert(0, 20 - std::min<std::size_t>(20, stamp.size()), '0');
  fs::path path;
  for (int n = 0;; ++n) {
    path = root_ / "snapshots" / (stamp + "-" + std::to_string(n) + ".idx");
    if (!fs::exists(path)) break;
  }
  WriteSnapshot(path, inverted, graphs);
  return path;
}

std::optional<fs::path> Store::LatestSnapshot() const {
  std::optional<fs::path> latest;
  for (const auto &file : fs::directory_iterator(root_ / "snapshots")) {
    if (file.path().extension() != ".idx") continue;
    if (!latest || file.path().filename() > latest->filename()) latest = file.path();
  }
  return latest;
}

std::map<std::string, ManifestEntry> Store::manifest() const {
  std::shared_lock lock(mu_);
  return entries_;
}

}  // namespace casegraph
