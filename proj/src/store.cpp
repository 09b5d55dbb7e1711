#include "tgk/store.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "tgk/abox.hpp"
#include "tgk/reader.hpp"
#include "tgk/sha256.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace tgk {

namespace {

std::string read_file_or_throw(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// docs/http/host/path mirror of a document URI
std::string sanitize_doc_uri(const std::string& doc) {
  std::string out;
  out.reserve(doc.size());
  size_t i = 0;
  size_t scheme_end = doc.find(':');
  if (scheme_end != std::string::npos) {
    out += doc.substr(0, scheme_end);
    i = scheme_end + 1;
    while (i < doc.size() && doc[i] == '/') ++i;
    out += '/';
  }
  for (; i < doc.size(); ++i) {
    char c = doc[i];
    out += (c == ':' || c == '?' || c == '\\') ? '_' : c;
  }
  if (out.empty() || out.back() == '/') out += "_index";
  return out;
}

const char* kRelationsDir = "index";

std::string doc_of_uri_text(const std::string& uri_text) {
  return uri_text.substr(0, uri_text.find('?'));
}

// Rewrites every reference to a renamed module inside one document.
void rewrite_module_refs(Document& doc, const Uri& old_mod, const Uri& new_mod) {
  auto fix_uri = [&](Uri& u) {
    if (u.module() == old_mod && u.mod) {
      u = Uri(new_mod.doc, new_mod.mod, u.sym);
    }
  };
  std::function<Morphism(const Morphism&)> fix_morphism = [&](const Morphism& m) -> Morphism {
    if (auto* id = m.as_identity()) {
      Uri t = id->theory;
      fix_uri(t);
      return Morphism::identity(t);
    }
    if (auto* link = m.as_import()) {
      Uri t = link->theory;
      fix_uri(t);
      return Morphism::import_link(t, link->path);
    }
    if (auto* v = m.as_view()) {
      Uri t = v->view;
      fix_uri(t);
      return Morphism::view_link(t);
    }
    const auto* c = m.as_compose();
    return Morphism::compose(fix_morphism(c->first), fix_morphism(c->second));
  };
  auto fix_term = [&](Term& t) {
    t = map_symbols(t, [&](const Uri& u) -> std::optional<Term> {
      if (u.module() == old_mod && u.mod) return Term::symbol(Uri(new_mod.doc, new_mod.mod, u.sym));
      return std::nullopt;
    });
  };
  auto fix_assignments = [&](std::vector<Assignment>& assignments) {
    for (auto& a : assignments) {
      if (auto* ca = std::get_if<ConstAssign>(&a)) {
        fix_term(ca->value);
      } else {
        auto& ia = std::get<ImportAssign>(a);
        ia.value = fix_morphism(ia.value);
      }
    }
  };
  auto fix_notation = [&](Notation& n) {
    fix_uri(n.target);
    if (n.uri.module() == old_mod) n.uri = Uri(new_mod.doc, new_mod.mod, n.uri.sym);
  };

  for (auto& m : doc.modules) {
    if (auto* t = std::get_if<Theory>(&m)) {
      if (doc.base.doc == old_mod.doc && t->name == *old_mod.mod) t->name = *new_mod.mod;
      if (t->meta) fix_uri(*t->meta);
      for (auto& d : t->declarations) {
        if (auto* c = std::get_if<Constant>(&d)) {
          if (c->type) fix_term(*c->type);
          if (c->definiens) fix_term(*c->definiens);
        } else if (auto* i = std::get_if<Import>(&d)) {
          fix_uri(i->from);
          fix_assignments(i->assignments);
        } else {
          fix_notation(std::get<Notation>(d));
        }
      }
    } else if (auto* v = std::get_if<View>(&m)) {
      if (doc.base.doc == old_mod.doc && v->name == *old_mod.mod) v->name = *new_mod.mod;
      fix_uri(v->from);
      fix_uri(v->to);
      fix_assignments(v->assignments);
      for (auto& n : v->notations) fix_notation(n);
    } else {
      auto& s = std::get<Style>(m);
      if (doc.base.doc == old_mod.doc && s.name == *old_mod.mod) s.name = *new_mod.mod;
      for (auto& imp : s.imports) fix_uri(imp);
      for (auto& n : s.notations) fix_notation(n);
    }
  }
}

}  // namespace

// Fact context backed by cached .abox files; never parses documents.
class StoreFactSource final : public FactSource {
 public:
  StoreFactSource(Store& store, std::set<std::string> masked) : store_(store), masked_(std::move(masked)) {}

  std::set<TypeName> kinds_of(const Uri& individual) const override {
    const FactIndex* idx = index_for(individual.doc);
    return idx ? idx->types_of(individual) : std::set<TypeName>{};
  }

  std::optional<Uri> domain_of(const Uri& u) const override { return single(u, RelName::HasDomain); }
  std::optional<Uri> codomain_of(const Uri& u) const override { return single(u, RelName::HasCodomain); }
  std::optional<Uri> meta_of(const Uri& u) const override { return single(u, RelName::HasMetaTheory); }

  std::set<Uri> dependencies_of(const Uri& module) const override {
    const FactIndex* idx = index_for(module.doc);
    if (!idx) return {};
    std::set<Uri> out = idx->objects(RelName::Imports, module);
    const auto& meta = idx->objects(RelName::HasMetaTheory, module);
    out.insert(meta.begin(), meta.end());
    return out;
  }

 private:
  std::optional<Uri> single(const Uri& u, RelName rel) const {
    const FactIndex* idx = index_for(u.doc);
    if (!idx) return std::nullopt;
    const auto& objs = idx->objects(rel, u);
    if (objs.size() != 1) return std::nullopt;
    return *objs.begin();
  }

  const FactIndex* index_for(const std::string& doc) const {
    if (masked_.count(doc)) return nullptr;
    auto it = cache_.find(doc);
    if (it != cache_.end()) return it->second.get();
    std::unique_ptr<FactIndex> idx;
    try {
      FactSet facts = store_.document_abox(Uri(doc));
      idx = std::make_unique<FactIndex>(facts);
    } catch (const Error&) {
      idx = nullptr;
    }
    auto [pos, ignored] = cache_.emplace(doc, std::move(idx));
    return pos->second.get();
  }

  Store& store_;
  std::set<std::string> masked_;
  mutable std::map<std::string, std::unique_ptr<FactIndex>> cache_;
};

std::unique_ptr<FactSource> Store::context(std::set<std::string> masked_docs) {
  return std::make_unique<StoreFactSource>(*this, std::move(masked_docs));
}

bool Store::exists(const fs::path& root) { return fs::exists(root / "revision"); }

Store Store::init(const fs::path& root) {
  if (exists(root)) throw Error(ErrorCode::IoError, "store already initialized at " + root.string());
  fs::create_directories(root / "docs");
  fs::create_directories(root / "abox");
  fs::create_directories(root / kRelationsDir);
  fs::create_directories(root / "history" / "blobs");
  Store store(root);
  store.head_ = 0;
  store.save_catalog();
  write_file_atomic(root / "revision", "0\n");
  return store;
}

Store Store::open(const fs::path& root) {
  if (!exists(root)) throw Error(ErrorCode::NotFound, "no store at " + root.string());
  Store store(root);
  store.head_ = std::stoull(read_file_or_throw(root / "revision"));
  store.load_catalog();
  return store;
}

void Store::load_catalog() {
  catalog_.clear();
  json j = json::parse(read_file_or_throw(root_ / "catalog.json"));
  for (const auto& e : j) {
    catalog_.push_back({e.at("prefix").get<std::string>(), e.at("location").get<std::string>()});
  }
}

void Store::save_catalog() {
  json j = json::array();
  for (const auto& e : catalog_) {
    j.push_back({{"prefix", e.prefix}, {"location", e.location}});
  }
  write_file_atomic(root_ / "catalog.json", j.dump(2) + "\n");
}

void Store::catalog_add(const std::string& prefix, const std::string& location) {
  for (auto& e : catalog_) {
    if (e.prefix == prefix) {
      e.location = location;
      save_catalog();
      return;
    }
  }
  catalog_.push_back({prefix, location});
  save_catalog();
}

std::string Store::mirror_path(const Uri& doc) const { return sanitize_doc_uri(doc.doc); }

std::optional<std::string> Store::locate(const std::string& doc_uri) const {
  const CatalogEntry* best = nullptr;
  for (const auto& e : catalog_) {
    if (doc_uri.rfind(e.prefix, 0) != 0) continue;
    if (!best || e.prefix.size() > best->prefix.size()) best = &e;
  }
  if (!best) return std::nullopt;
  if (best->prefix == doc_uri) return best->location;
  // prefix entry: append the remainder
  std::string rest = doc_uri.substr(best->prefix.size());
  std::string loc = best->location;
  if (!loc.empty() && loc.back() != '/' && !rest.empty() && rest.front() != '/') loc += '/';
  return loc + rest;
}

std::string Store::read_rel(const std::string& rel_path) const { return read_file_or_throw(root_ / rel_path); }

void Store::write_rel(const std::string& rel_path, const std::string& content) {
  write_file_atomic(root_ / rel_path, content);
}

std::string Store::blob_store(const std::string& content) {
  std::string hash = sha256_hex(content);
  fs::path path = root_ / "history" / "blobs" / hash;
  if (!fs::exists(path)) write_file_atomic(path, content);
  return hash;
}

Revision Store::commit(const std::vector<fs::path>& files, const std::string& message,
                       const std::string& author) {
  std::lock_guard<std::mutex> lock(*writer_);

  // parse and grammar-check exactly the committed files
  struct Pending {
    fs::path file;
    std::string bytes;
    Document doc;
  };
  std::vector<Pending> pending;
  ValidationReport grammar;
  grammar.requested = ValidationLevel::Structural;
  for (const auto& file : files) {
    std::string bytes;
    try {
      bytes = read_file_or_throw(file);
    } catch (const Error& e) {
      grammar.errors.push_back({e.code(), file.string(), e.message()});
      continue;
    }
    ++stats_.documents_parsed;
    try {
      Document doc = parse_document_auto(bytes, file.filename().string());
      pending.push_back({file, std::move(bytes), std::move(doc)});
    } catch (const Error& e) {
      grammar.errors.push_back({e.code(), e.at() ? e.at()->to_string() : file.string(), e.message()});
    }
  }
  if (!grammar.ok()) throw CommitRejected(std::move(grammar));

  std::set<std::string> committed_docs;
  std::vector<AtomicDecl> atoms;
  for (const auto& p : pending) {
    if (!committed_docs.insert(p.doc.base.doc).second) {
      ValidationReport dup;
      dup.errors.push_back({ErrorCode::DuplicateUri, p.doc.base.str(), "document committed twice"});
      throw CommitRejected(std::move(dup));
    }
    for (auto& a : atomize(p.doc)) atoms.push_back(std::move(a));
  }

  auto ctx = context(committed_docs);
  ValidationReport report = validate_structural(atoms, *ctx);
  if (!report.ok()) throw CommitRejected(std::move(report));

  // persist
  Revision rev;
  rev.number = head_ + 1;
  rev.timestamp = iso_timestamp();
  rev.author = author;
  rev.message = message;

  std::map<std::string, FactSet> new_facts;
  json manifest_changes = json::array();
  for (const auto& p : pending) {
    std::string mirror = mirror_path(p.doc.base);
    FactSet facts = extract_abox(p.doc);
    std::string abox_text = serialize_abox(facts);

    write_rel("docs/" + mirror, p.bytes);
    write_rel("abox/" + mirror + ".abox", abox_text);
    catalog_add(p.doc.base.doc, "docs/" + mirror);

    manifest_changes.push_back({{"uri", p.doc.base.doc},
                                {"path", "docs/" + mirror},
                                {"blob", blob_store(p.bytes)},
                                {"abox_blob", blob_store(abox_text)}});
    rev.changed.push_back("docs/" + mirror);
    new_facts.emplace(p.doc.base.doc, std::move(facts));
  }

  update_indexes(new_facts);

  json manifest = {{"number", rev.number}, {"timestamp", rev.timestamp}, {"author", rev.author},
                   {"message", rev.message}, {"changes", manifest_changes}};
  write_rel("history/rev-" + std::to_string(rev.number) + ".json", manifest.dump(2) + "\n");
  head_ = rev.number;
  write_rel("revision", std::to_string(head_) + "\n");
  return rev;
}

void Store::update_indexes(const std::map<std::string, FactSet>& new_by_doc) {
  // group new lines per relation
  std::map<int, std::vector<std::pair<std::string, std::string>>> fresh;
  for (const auto& [doc, facts] : new_by_doc) {
    for (const auto& f : facts) {
      if (f.unary) continue;
      fresh[f.pred].emplace_back(f.subject.str(), f.object.str());
    }
  }
  for (int r = 0; r < kRelCount; ++r) {
    std::string rel = rel_name_str(static_cast<RelName>(r));
    for (bool reverse : {false, true}) {
      fs::path path = root_ / kRelationsDir / (rel + (reverse ? ".rev" : ".fwd"));
      std::vector<std::string> lines;
      if (fs::exists(path)) {
        std::istringstream in(read_file_or_throw(path));
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          // provenance is the fact's subject: field 1 forward, field 2 reverse
          size_t tab = line.find('\t');
          std::string subject = reverse ? line.substr(tab + 1) : line.substr(0, tab);
          if (new_by_doc.count(doc_of_uri_text(subject))) continue;
          lines.push_back(line);
        }
      }
      auto it = fresh.find(r);
      if (it != fresh.end()) {
        for (const auto& [s, o] : it->second) {
          lines.push_back(reverse ? o + "\t" + s : s + "\t" + o);
        }
      }
      std::sort(lines.begin(), lines.end());
      lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
      std::string content;
      for (const auto& l : lines) {
        content += l;
        content += '\n';
      }
      write_file_atomic(path, content);
    }
  }
}

std::string Store::document_bytes(const Uri& doc, std::optional<uint64_t> at) {
  auto location = locate(doc.doc);
  if (!location) throw Error(ErrorCode::NotFound, "document not cataloged", doc.str());
  if (at) {
    if (*at > head_) throw Error(ErrorCode::RevisionUnknown, "revision " + std::to_string(*at) + " is after head");
    if (location->rfind("docs/", 0) != 0) {
      throw Error(ErrorCode::RevisionUnknown, "no history for external location " + *location);
    }
    for (uint64_t r = *at; r >= 1; --r) {
      fs::path manifest_path = root_ / ("history/rev-" + std::to_string(r) + ".json");
      if (!fs::exists(manifest_path)) continue;
      json manifest = json::parse(read_file_or_throw(manifest_path));
      for (const auto& change : manifest.at("changes")) {
        if (change.at("path").get<std::string>() == *location) {
          return read_file_or_throw(root_ / "history" / "blobs" / change.at("blob").get<std::string>());
        }
      }
    }
    throw Error(ErrorCode::NotFound, "document absent at revision " + std::to_string(*at), doc.str());
  }
  if (location->rfind("docs/", 0) == 0) return read_rel(*location);
  if (location->rfind("http://", 0) == 0 || location->rfind("https://", 0) == 0) {
    throw Error(ErrorCode::NotFound, "remote retrieval requires the service layer", doc.str());
  }
  return read_file_or_throw(*location);
}

FactSet Store::document_abox(const Uri& doc) {
  auto location = locate(doc.doc);
  if (!location || location->rfind("docs/", 0) != 0) {
    throw Error(ErrorCode::NotFound, "no cached facts for document", doc.str());
  }
  std::string rel = "abox/" + location->substr(5) + ".abox";
  return parse_abox(read_rel(rel));
}

std::shared_ptr<TheoryGraph> Store::load_graph(const std::vector<Uri>& docs, std::optional<uint64_t> at) {
  auto graph = std::make_shared<TheoryGraph>();
  std::set<std::string> loaded;
  std::function<void(const Uri&)> ensure = [&](const Uri& doc_uri) {
    std::string doc = doc_uri.doc;
    if (doc.empty() || !loaded.insert(doc).second) return;
    std::string bytes = document_bytes(Uri(doc), at);
    ++stats_.documents_parsed;
    Document parsed = parse_document_auto(bytes, doc);
    std::vector<Uri> next;
    for (const auto& m : parsed.modules) {
      if (auto* t = std::get_if<Theory>(&m)) {
        if (t->meta) next.push_back(*t->meta);
        for (const auto* imp : t->imports()) next.push_back(imp->from);
        for (const auto* imp : t->imports()) {
          for (const auto& a : imp->assignments) {
            if (auto* ia = std::get_if<ImportAssign>(&a)) {
              std::function<void(const Morphism&)> roots = [&](const Morphism& mm) {
                if (auto* id = mm.as_identity()) next.push_back(id->theory);
                if (auto* link = mm.as_import()) next.push_back(link->theory);
                if (auto* vl = mm.as_view()) next.push_back(vl->view);
                if (auto* c = mm.as_compose()) {
                  roots(c->first);
                  roots(c->second);
                }
              };
              roots(ia->value);
            }
          }
        }
      } else if (auto* v = std::get_if<View>(&m)) {
        next.push_back(v->from);
        next.push_back(v->to);
        for (const auto& a : v->assignments) {
          if (auto* ia = std::get_if<ImportAssign>(&a)) {
            if (auto* vl = ia->value.as_view()) next.push_back(vl->view);
            if (auto* link = ia->value.as_import()) next.push_back(link->theory);
          }
        }
      } else {
        for (const auto& imp : std::get<Style>(m).imports) next.push_back(imp);
      }
    }
    graph->add_document(std::move(parsed));
    for (const auto& n : next) ensure(n);
  };
  for (const auto& d : docs) ensure(d);
  return graph;
}

Store::Retrieved Store::retrieve(const Uri& uri, std::optional<uint64_t> at) {
  if (uri.is_doc_only()) {
    return {"text/xml", document_bytes(uri, at)};
  }
  auto graph = load_graph({Uri(uri.doc)}, at);
  Flattener flat(*graph);
  auto item = flat.deref(uri);
  if (!item.found()) throw Error(ErrorCode::NotFound, "nothing at this URI", uri.str());

  XmlNode node;
  if (item.theory || item.view) {
    const Document* doc = graph->document(Uri(uri.doc));
    Document wrapper;
    wrapper.base = doc->base;
    wrapper.modules.push_back(*doc->find_module(*uri.mod));
    return {"text/xml", serialize_document(wrapper)};
  }
  if (item.constant) {
    node.name = "constant";
    node.attrs.emplace_back("name", uri.sym->str());
    node.attrs.emplace_back("theory", uri.module().str());
    if (item.constant->type) {
      XmlNode type;
      type.name = "type";
      type.children.push_back(term_to_xml(*item.constant->type, Uri(uri.doc)));
      node.children.push_back(std::move(type));
    }
    if (item.constant->definiens) {
      XmlNode def;
      def.name = "definition";
      def.children.push_back(term_to_xml(*item.constant->definiens, Uri(uri.doc)));
      node.children.push_back(std::move(def));
    }
  } else {
    const InducedConstant& ind = *item.induced;
    node.name = "constant";
    node.attrs.emplace_back("name", uri.sym->str());
    node.attrs.emplace_back("theory", uri.module().str());
    node.attrs.emplace_back("induced", "true");
    node.attrs.emplace_back("origin", ind.origin.str());
    node.attrs.emplace_back("morphism", ind.via.str());
    if (ind.type) {
      XmlNode type;
      type.name = "type";
      type.children.push_back(term_to_xml(*ind.type, Uri(uri.doc)));
      node.children.push_back(std::move(type));
    }
    if (ind.definiens) {
      XmlNode def;
      def.name = "definition";
      def.children.push_back(term_to_xml(*ind.definiens, Uri(uri.doc)));
      node.children.push_back(std::move(def));
    }
  }
  return {"text/xml", XmlWriter().finish(node)};
}

std::map<Uri, std::set<Uri>> Store::depends_on_edges(bool reverse) {
  ++stats_.index_reads;
  std::map<Uri, std::set<Uri>> edges;
  fs::path path = root_ / kRelationsDir / (std::string("DependsOn") + (reverse ? ".rev" : ".fwd"));
  if (!fs::exists(path)) return edges;
  std::istringstream in(read_file_or_throw(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    edges[parse_uri(line.substr(0, tab))].insert(parse_uri(line.substr(tab + 1)));
  }
  return edges;
}

std::set<Uri> Store::cone(const Uri& module, bool forward, bool transitive) {
  auto location = locate(module.doc);
  if (!location) throw Error(ErrorCode::UnknownModule, "module's document is not in the store", module.str());
  FactSet facts = document_abox(Uri(module.doc));
  FactIndex own(facts);
  if (!own.has_type(module.module(), TypeName::Theory) && !own.has_type(module.module(), TypeName::View) &&
      !own.has_type(module.module(), TypeName::Style)) {
    throw Error(ErrorCode::UnknownModule, "not a module", module.str());
  }

  auto edges = depends_on_edges(forward);
  std::set<Uri> out{module.module()};
  std::vector<Uri> frontier{module.module()};
  while (!frontier.empty()) {
    Uri current = frontier.back();
    frontier.pop_back();
    auto it = edges.find(current);
    if (it == edges.end()) continue;
    for (const auto& next : it->second) {
      if (out.insert(next).second && transitive) frontier.push_back(next);
    }
    if (!transitive) break;
  }
  return out;
}

std::vector<Notation> Store::collect_notations(const Uri& item) {
  std::set<Uri> modules = cone(item, /*forward=*/false, /*transitive=*/true);
  std::set<std::string> docs;
  for (const auto& m : modules) docs.insert(m.doc);

  std::vector<Notation> out;
  for (const auto& doc : docs) {
    std::string bytes = document_bytes(Uri(doc));
    ++stats_.documents_parsed;
    Document parsed = parse_document_auto(bytes, doc);
    for (const auto& m : parsed.modules) {
      if (!modules.count(parsed.module_uri(m))) continue;
      if (auto* t = std::get_if<Theory>(&m)) {
        for (const auto* n : t->notations()) out.push_back(*n);
      } else if (auto* v = std::get_if<View>(&m)) {
        out.insert(out.end(), v->notations.begin(), v->notations.end());
      } else {
        const auto& s = std::get<Style>(m);
        out.insert(out.end(), s.notations.begin(), s.notations.end());
      }
    }
  }
  return out;
}

Revision Store::rename_module(const Uri& old_module, const LocalName& new_name) {
  if (!old_module.mod) throw Error(ErrorCode::UnknownModule, "not a module URI", old_module.str());
  Uri old_mod = old_module.module();
  Uri new_mod(old_mod.doc, new_name);

  // gather the documents of the one-step forward cone, plus the module's own
  std::set<Uri> affected_modules = cone(old_mod, /*forward=*/true, /*transitive=*/false);
  std::set<std::string> docs;
  for (const auto& m : affected_modules) docs.insert(m.doc);
  docs.insert(old_mod.doc);

  if (new_name == *old_mod.mod) {
    // renaming to the current name commits an empty revision
    std::lock_guard<std::mutex> lock(*writer_);
    Revision rev;
    rev.number = head_ + 1;
    rev.timestamp = iso_timestamp();
    rev.message = "rename " + old_mod.str() + " (no-op)";
    json manifest = {{"number", rev.number}, {"timestamp", rev.timestamp}, {"author", ""},
                     {"message", rev.message}, {"changes", json::array()}};
    write_rel("history/rev-" + std::to_string(rev.number) + ".json", manifest.dump(2) + "\n");
    head_ = rev.number;
    write_rel("revision", std::to_string(head_) + "\n");
    return rev;
  }

  // clash check in the module's own document
  {
    std::string bytes = document_bytes(Uri(old_mod.doc));
    ++stats_.documents_parsed;
    Document own = parse_document_auto(bytes, old_mod.doc);
    if (!own.find_module(*old_mod.mod)) {
      throw Error(ErrorCode::UnknownModule, "module not found in its document", old_mod.str());
    }
    if (own.find_module(new_name)) {
      throw Error(ErrorCode::NameClash, "module '" + new_name.str() + "' already exists in " + old_mod.doc);
    }
  }

  // rewrite affected documents into a staging area and commit them
  fs::path staging = root_ / "tmp-rename";
  fs::create_directories(staging);
  std::vector<fs::path> files;
  size_t i = 0;
  for (const auto& doc_uri : docs) {
    std::string bytes = document_bytes(Uri(doc_uri));
    ++stats_.documents_parsed;
    Document parsed = parse_document_auto(bytes, doc_uri);
    rewrite_module_refs(parsed, old_mod, new_mod);
    fs::path file = staging / ("doc" + std::to_string(i++) + ".omdoc");
    write_file_atomic(file, serialize_document(parsed));
    files.push_back(file);
  }
  try {
    Revision rev = commit(files, "rename " + old_mod.str() + " to " + new_name.str());
    fs::remove_all(staging);
    return rev;
  } catch (...) {
    fs::remove_all(staging);
    throw;
  }
}

Revision Store::revision_info(uint64_t number) {
  fs::path path = root_ / ("history/rev-" + std::to_string(number) + ".json");
  if (!fs::exists(path)) throw Error(ErrorCode::RevisionUnknown, "no revision " + std::to_string(number));
  json manifest = json::parse(read_file_or_throw(path));
  Revision rev;
  rev.number = manifest.at("number").get<uint64_t>();
  rev.timestamp = manifest.at("timestamp").get<std::string>();
  rev.author = manifest.value("author", "");
  rev.message = manifest.value("message", "");
  for (const auto& c : manifest.at("changes")) rev.changed.push_back(c.at("path").get<std::string>());
  return rev;
}

std::string Store::state_fingerprint() {
  std::vector<std::string> entries;
  for (const char* top : {"docs", "abox", "index", "history"}) {
    fs::path dir = root_ / top;
    if (!fs::exists(dir)) continue;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      std::string rel = fs::relative(entry.path(), root_).generic_string();
      entries.push_back(rel + "|" + sha256_hex(read_file_or_throw(entry.path())));
    }
  }
  for (const char* file : {"catalog.json", "revision"}) {
    entries.push_back(std::string(file) + "|" + sha256_hex(read_file_or_throw(root_ / file)));
  }
  std::sort(entries.begin(), entries.end());
  std::string all;
  for (const auto& e : entries) {
    all += e;
    all += '\n';
  }
  return sha256_hex(all);
}

}  // namespace tgk
