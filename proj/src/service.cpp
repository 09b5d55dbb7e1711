#include "tgk/service.hpp"

#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <functional>

#include "tgk/abox.hpp"
#include "tgk/cones.hpp"
#include "tgk/reader.hpp"
#include "tgk/xml.hpp"

namespace fs = std::filesystem;

namespace tgk {

std::string uris_xml(const std::set<Uri>& uris) {
  XmlNode root;
  root.name = "uris";
  for (const auto& u : uris) {
    XmlNode n;
    n.name = "uri";
    n.attrs.emplace_back("href", u.str());
    root.children.push_back(std::move(n));
  }
  return XmlWriter().finish(root);
}

std::string uris_lines(const std::set<Uri>& uris) {
  std::string out;
  for (const auto& u : uris) {
    out += u.str();
    out += '\n';
  }
  return out;
}

Store::Retrieved Service::deref(const std::string& uri_text, bool self_contained) {
  Uri uri = parse_uri(uri_text);
  if (!self_contained || !uri.mod || uri.sym) return store_.retrieve(uri);

  // inline the one-step backward cone into a single document
  std::set<Uri> modules = store_.cone(uri, /*forward=*/false, /*transitive=*/false);
  std::set<std::string> docs;
  for (const auto& m : modules) docs.insert(m.doc);
  std::vector<Uri> roots;
  for (const auto& d : docs) roots.emplace_back(d);
  auto graph = store_.load_graph(roots);

  Document combined;
  combined.base = Uri(uri.doc);
  // the requested module last, its prerequisites first
  for (const auto& m : modules) {
    if (m == uri.module()) continue;
    if (const Module* mod = graph->module(m)) combined.modules.push_back(*mod);
  }
  if (const Module* mod = graph->module(uri.module())) combined.modules.push_back(*mod);
  return {"text/xml", serialize_document(combined)};
}

std::string Service::abox(const std::string& doc_text) {
  return serialize_abox(store_.document_abox(parse_uri(doc_text)));
}

std::set<Uri> Service::query_rel(const std::string& start_text, const std::string& rel_text) {
  Uri start = parse_uri(start_text);
  RelExpr expr = parse_rel_expr(rel_text);
  // facts of every document that can contribute: the start document plus
  // everything reachable through the DependsOn index, both directions
  std::set<Uri> scope = store_.cone(start.module().is_doc_only() ? start : start.module(), false, true);
  auto more = store_.cone(start.module().is_doc_only() ? start : start.module(), true, true);
  scope.insert(more.begin(), more.end());
  std::set<std::string> docs;
  docs.insert(start.doc);
  for (const auto& m : scope) docs.insert(m.doc);
  FactIndex index;
  for (const auto& d : docs) {
    for (const auto& f : store_.document_abox(Uri(d))) index.add(f);
  }
  return query(index, start, expr);
}

std::set<Uri> Service::cone(const std::string& uri_text, bool forward, bool one_step) {
  return store_.cone(parse_uri(uri_text), forward, !one_step);
}

std::string Service::cone_document(const std::string& uri_text, bool forward, bool one_step) {
  Uri uri = parse_uri(uri_text);
  std::set<Uri> modules = store_.cone(uri, forward, !one_step);
  std::set<std::string> docs;
  for (const auto& m : modules) docs.insert(m.doc);
  std::vector<Uri> roots;
  for (const auto& d : docs) roots.emplace_back(d);
  auto graph = store_.load_graph(roots);

  Document combined;
  combined.base = Uri(uri.doc);
  for (const auto& m : modules) {
    if (m == uri.module()) continue;
    if (const Module* mod = graph->module(m)) combined.modules.push_back(*mod);
  }
  if (const Module* mod = graph->module(uri.module())) combined.modules.push_back(*mod);
  return serialize_document(combined);
}

Store::Retrieved Service::present(const std::string& uri_text, const std::string& style_text,
                                  const std::string& format) {
  Uri uri = parse_uri(uri_text);
  RenderTarget target = format == "html" ? RenderTarget::Html : RenderTarget::Text;
  if (format != "html" && format != "text" && !format.empty()) {
    throw Error(ErrorCode::MalformedUri, "format must be 'text' or 'html'");
  }

  NotationSet notations = default_notations();
  // format-independent notations from the backward cone of the item
  for (const auto& n : store_.collect_notations(uri)) notations.add(n);
  std::vector<Uri> roots{Uri(uri.doc)};
  if (!style_text.empty()) {
    Uri style = parse_uri(style_text);
    roots.push_back(Uri(style.doc));
    auto graph = store_.load_graph(roots);
    const Module* m = graph->module(style);
    const Style* s = m ? std::get_if<Style>(m) : nullptr;
    if (!s) throw Error(ErrorCode::UnknownModule, "not a style", style.str());
    std::set<Uri> seen;
    std::function<void(const Uri&)> visit = [&](const Uri& su) {
      if (!seen.insert(su.module()).second) return;
      const Module* sm = graph->module(su);
      const Style* ss = sm ? std::get_if<Style>(sm) : nullptr;
      if (!ss) throw Error(ErrorCode::UnknownModule, "not a style", su.str());
      for (const auto& imp : ss->imports) visit(imp);
      for (const auto& n : ss->notations) notations.add(n);
    };
    visit(style);
    Flattener flat(*graph);
    return {format == "html" ? "text/html" : "text/plain", render_item(flat, uri, notations, target)};
  }
  auto graph = store_.load_graph(roots);
  Flattener flat(*graph);
  return {format == "html" ? "text/html" : "text/plain", render_item(flat, uri, notations, target)};
}

namespace {

int status_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NotFound:
    case ErrorCode::RevisionUnknown:
    case ErrorCode::UnknownModule:
      return 404;
    case ErrorCode::MalformedUri:
    case ErrorCode::MissingContext:
    case ErrorCode::UnknownRelation:
    case ErrorCode::GrammarError:
      return 400;
    case ErrorCode::ValidationRejected:
      return 409;
    default:
      return 500;
  }
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const CommitRejected& e) {
    res.status = 409;
    res.set_content(e.report().to_text(), "text/plain");
  } catch (const Error& e) {
    res.status = status_for(e);
    res.set_content(std::string(e.what()) + "\n", "text/plain");
  } catch (const std::exception& e) {
    res.status = 500;
    res.set_content(std::string(e.what()) + "\n", "text/plain");
  }
}

}  // namespace

int Service::serve(const std::string& host, int port) {
  httplib::Server server;

  server.Get("/deref", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto out = deref(req.get_param_value("uri"), req.get_param_value("self-contained") == "true");
      res.set_content(out.body, out.content_type);
    });
  });

  server.Get("/abox", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { res.set_content(abox(req.get_param_value("doc")), "text/plain"); });
  });

  server.Get("/query", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto uris = query_rel(req.get_param_value("start"), req.get_param_value("rel"));
      if (req.get_param_value("format") == "xml") {
        res.set_content(uris_xml(uris), "text/xml");
      } else {
        res.set_content(uris_lines(uris), "text/plain");
      }
    });
  });

  server.Get("/cone", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      bool forward = req.get_param_value("direction") != "backward";
      bool one_step = req.get_param_value("one-step") == "true";
      if (req.get_param_value("emit-omdoc") == "true") {
        res.set_content(cone_document(req.get_param_value("uri"), forward, one_step), "text/xml");
        return;
      }
      auto uris = cone(req.get_param_value("uri"), forward, one_step);
      if (req.get_param_value("format") == "xml") {
        res.set_content(uris_xml(uris), "text/xml");
      } else {
        res.set_content(uris_lines(uris), "text/plain");
      }
    });
  });

  server.Get("/present", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto out = present(req.get_param_value("uri"), req.get_param_value("style"),
                         req.get_param_value("format").empty() ? "text" : req.get_param_value("format"));
      res.set_content(out.body, out.content_type);
    });
  });

  server.Post("/commit", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      fs::path staging = store_.root() / "tmp-upload";
      fs::create_directories(staging);
      std::vector<fs::path> files;
      size_t i = 0;
      if (req.files.empty()) {
        // raw body: a single document
        fs::path file = staging / "body.omdoc";
        std::ofstream(file, std::ios::binary) << req.body;
        files.push_back(file);
      } else {
        for (const auto& [name, file] : req.files) {
          fs::path path = staging / ("upload" + std::to_string(i++) + ".omdoc");
          std::ofstream(path, std::ios::binary) << file.content;
          files.push_back(path);
        }
      }
      try {
        Revision rev = store_.commit(files, req.get_param_value("message"));
        fs::remove_all(staging);
        res.set_content("revision " + std::to_string(rev.number) + "\n", "text/plain");
      } catch (...) {
        fs::remove_all(staging);
        throw;
      }
    });
  });

  if (!server.listen(host, port)) return 1;
  return 0;
}

}  // namespace tgk
