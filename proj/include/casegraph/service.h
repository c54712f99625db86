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

#ifndef CASEGRAPH_SERVICE_H_
#define CASEGRAPH_SERVICE_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>

#include "casegraph/error.h"
#include "casegraph/ingest.h"
#include "casegraph/json_codec.h"

namespace httplib {
class Server;
}

namespace casegraph {

// HTTP status for an error kind: 400 malformed input, 404 unknown resource,
// 409 duplicate, 422 well-formed but domain-invalid, 502 upstream fetch
// failures, 500 otherwise.
int HttpStatusFor(ErrorKind kind);

struct ServiceOptions {
  FetchConfig fetch;
  std::size_t default_k = 10;
  std::size_t max_k = 1000;
  std::size_t default_page = 50;
  std::size_t max_page = 1000;
};

struct HttpResponse {
  int status = 200;
  Json body;
};

// JSON API over a pipeline backed by a store:
//
//   GET    /api/health
//   GET    /api/endpoints
//   GET    /api/documents?offset=&limit=
//   POST   /api/documents
//   GET    /api/documents/{id}
//   DELETE /api/documents/{id}
//   GET    /api/documents/{id}/graph?closure=true|false
//   PUT    /api/documents/{id}/annotations
//   POST   /api/search
//   POST   /api/reason
//
// Errors are {"error":{"kind","message","detail"}}.
class Service {
 public:
  // `pipeline` must have a store.
  Service(Pipeline *pipeline, ServiceOptions options = {});

  // Routes one request without any socket. `path` excludes the query string.
  HttpResponse Handle(const std::string &method, const std::string &path,
                      const std::map<std::string, std::string> &query,
                      const std::string &body) const;

  // Registers every route on `server`; files under `static_dir`, when given,
  // are served from "/".
  void Mount(httplib::Server *server,
             const std::filesystem::path &static_dir = {}) const;

  // Machine-readable list of routes with their status codes.
  static Json EndpointManifest();

 private:
  HttpResponse Route(const std::string &method, const std::string &path,
                     const std::map<std::string, std::string> &query,
                     const std::string &body) const;

  HttpResponse Health() const;
  HttpResponse ListDocuments(const std::map<std::string, std::string> &query) const;
  HttpResponse GetDocument(const std::string &id) const;
  HttpResponse DeleteDocument(const std::string &id) const;
  HttpResponse PostDocument(const std::string &body) const;
  HttpResponse GetGraph(const std::string &id,
                        const std::map<std::string, std::string> &query) const;
  HttpResponse PutAnnotations(const std::string &id, const std::string &body) const;
  HttpResponse Search(const std::string &body) const;
  HttpResponse Reason(const std::string &body) const;

  Pipeline *pipeline_;
  ServiceOptions options_;
};

// Response body of POST /api/reason for a relation list.
Json ReasonReport(const std::vector<RelationAssertion> &relations,
                  temporal::ScoreOptions options = {});

}  // namespace casegraph

#endif  // CASEGRAPH_SERVICE_H_
