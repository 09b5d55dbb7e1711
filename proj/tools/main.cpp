#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tgk/abox.hpp"
#include "tgk/checker.hpp"
#include "tgk/cones.hpp"
#include "tgk/present.hpp"
#include "tgk/reader.hpp"
#include "tgk/service.hpp"
#include "tgk/store.hpp"

namespace fs = std::filesystem;
using namespace tgk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Options {
  std::string store_dir;
  std::string format = "lines";
  std::vector<std::string> files;

  bool store_available() const { return Store::exists(store_dir); }

  Store open_store() const {
    if (!Store::exists(store_dir)) {
      throw Error(ErrorCode::NotFound, "no store at '" + store_dir + "' (run 'tgk commit --store <dir>' first)");
    }
    return Store::open(store_dir);
  }

  // graph from --file arguments; used when no store is involved
  TheoryGraph file_graph() const {
    TheoryGraph graph;
    for (const auto& f : files) {
      graph.add_document(parse_document_auto(read_file(f), f));
    }
    return graph;
  }

  FactSet file_facts() const {
    FactSet out;
    for (const auto& f : files) {
      FactSet facts = extract_abox(parse_document_auto(read_file(f), f));
      out.insert(facts.begin(), facts.end());
    }
    return out;
  }
};

int run_validate(const Options& opt, const std::string& level, const std::vector<std::string>& paths,
                 bool quiet = false) {
  ValidationReport report;
  report.requested = level == "grammar"    ? ValidationLevel::Grammar
                     : level == "typed"    ? ValidationLevel::Typed
                                           : ValidationLevel::Structural;

  std::vector<Document> docs;
  for (const auto& path : paths) {
    try {
      docs.push_back(parse_document_auto(read_file(path), path));
    } catch (const Error& e) {
      report.errors.push_back({e.code(), e.at() ? e.at()->to_string() : path, e.message()});
    }
  }
  report.achieved = ValidationLevel::Grammar;

  if (report.ok() && report.requested != ValidationLevel::Grammar) {
    std::vector<AtomicDecl> atoms;
    std::set<std::string> own;
    for (const auto& d : docs) {
      own.insert(d.base.doc);
      for (auto& a : atomize(d)) atoms.push_back(std::move(a));
    }
    ValidationReport structural;
    if (opt.store_available()) {
      Store store = opt.open_store();
      structural = validate_structural(atoms, *store.context(own));
    } else {
      structural = validate_structural(atoms, EmptyFactSource());
    }
    report.errors = structural.errors;
    report.warnings = structural.warnings;
    report.declarations_checked = structural.declarations_checked;
    report.achieved = structural.achieved;

    if (report.ok() && report.requested == ValidationLevel::Typed) {
      TheoryGraph graph;
      for (auto& d : docs) graph.add_document(std::move(d));
      PluginRegistry plugins;
      plugins.set_default(syntactic_foundation());
      ValidationReport typed = validate_typed(graph, plugins);
      report.errors = typed.errors;
      report.warnings.insert(report.warnings.end(), typed.warnings.begin(), typed.warnings.end());
      report.achieved = typed.achieved;
    }
  }

  if (!quiet) std::cout << (opt.format == "xml" ? report.to_xml() : report.to_text());
  return report.ok() ? kExitOk : kExitFailure;
}

void print_uris(const Options& opt, const std::set<Uri>& uris) {
  std::cout << (opt.format == "xml" ? uris_xml(uris) : uris_lines(uris));
}

// flat form emitted in the document syntax
std::string flat_document(const Flattener& flat, const Uri& theory_uri, bool include_meta) {
  const Theory* t = flat.graph().theory(theory_uri);
  if (!t) throw Error(ErrorCode::UnknownModule, "not a theory", theory_uri.str());
  Document doc;
  doc.base = Uri(theory_uri.doc);
  Theory out;
  out.name = *theory_uri.mod;
  for (const auto& e : flat.flat_entries(theory_uri, include_meta)) {
    auto item = flat.deref(theory_uri.module().with_sym(e.path));
    Constant c;
    c.name = e.path;
    if (item.constant) {
      c.type = item.constant->type;
      c.definiens = item.constant->definiens;
    } else if (item.induced) {
      c.type = item.induced->type;
      c.definiens = item.induced->definiens;
    }
    out.declarations.push_back(std::move(c));
  }
  doc.modules.push_back(std::move(out));
  return serialize_document(doc);
}

int dispatch(const Options& opt, const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const CommitRejected& e) {
    std::cout << e.report().to_text();
    std::cerr << "commit rejected" << std::endl;
    return kExitFailure;
  } catch (const Error& e) {
    std::cerr << e.what() << std::endl;
    switch (e.code()) {
      case ErrorCode::MalformedUri:
      case ErrorCode::UnknownRelation:
      case ErrorCode::MissingContext:
        return kExitUsage;
      default:
        return kExitFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << std::endl;
    return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"theory graph kit"};
  app.require_subcommand(1);

  Options opt;
  const char* env_store = std::getenv("TGK_STORE");
  opt.store_dir = env_store ? env_store : "./tgkstore";
  app.add_option("--store", opt.store_dir, "store directory");
  app.add_option("--format", opt.format, "output format: lines or xml")
      ->check(CLI::IsMember({"lines", "xml"}));
  app.add_option("--file", opt.files, "load a document file instead of using the store");

  // validate
  auto* validate = app.add_subcommand("validate", "check documents");
  std::string level = "structural";
  std::vector<std::string> validate_paths;
  validate->add_option("--level", level, "grammar, structural or typed")
      ->check(CLI::IsMember({"grammar", "structural", "typed"}));
  validate->add_option("paths", validate_paths, "document files")->required();

  // flatten
  auto* flatten_cmd = app.add_subcommand("flatten", "emit the flat form of a theory");
  std::string flatten_uri;
  bool include_meta = false;
  flatten_cmd->add_option("theory", flatten_uri, "theory URI")->required();
  flatten_cmd->add_flag("--include-meta", include_meta, "also list constants induced by the meta-theory");

  // deref
  auto* deref_cmd = app.add_subcommand("deref", "dereference a URI");
  std::string deref_uri;
  bool self_contained = false;
  deref_cmd->add_option("uri", deref_uri, "URI to dereference")->required();
  deref_cmd->add_flag("--self-contained", self_contained, "inline the one-step backward cone");

  // query
  auto* query_cmd = app.add_subcommand("query", "evaluate a relation expression");
  std::string query_start, query_rel;
  query_cmd->add_option("start", query_start, "start individual")->required();
  query_cmd->add_option("rel", query_rel, "relation expression")->required();

  // cone
  auto* cone_cmd = app.add_subcommand("cone", "dependency cones");
  std::string cone_uri;
  bool cone_forward = false, cone_backward = false, cone_one_step = false, emit_omdoc = false;
  cone_cmd->add_flag("--forward", cone_forward, "modules that need this one");
  cone_cmd->add_flag("--backward", cone_backward, "modules this one needs");
  cone_cmd->add_flag("--one-step", cone_one_step, "direct edges only");
  cone_cmd->add_flag("--emit-omdoc", emit_omdoc, "emit the cone as one self-contained document");
  cone_cmd->add_option("module", cone_uri, "module URI")->required();

  // present
  auto* present_cmd = app.add_subcommand("present", "render an item");
  std::string present_uri, present_style, present_format = "text";
  present_cmd->add_option("uri", present_uri, "item URI")->required();
  present_cmd->add_option("--style", present_style, "style URI");
  present_cmd->add_option("--format", present_format, "text or html")
      ->check(CLI::IsMember({"text", "html"}));

  // commit
  auto* commit_cmd = app.add_subcommand("commit", "validate and store documents");
  std::vector<std::string> commit_paths;
  std::string commit_message = "";
  commit_cmd->add_option("paths", commit_paths, "document files")->required();
  commit_cmd->add_option("-m,--message", commit_message, "commit message");

  // rename
  auto* rename_cmd = app.add_subcommand("rename", "rename a module and patch its forward cone");
  std::string rename_uri, rename_to;
  rename_cmd->add_option("module", rename_uri, "module URI")->required();
  rename_cmd->add_option("name", rename_to, "new module name")->required();

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "HTTP facade over the store");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve_cmd->add_option("--port", port, "TCP port");
  serve_cmd->add_option("--host", host, "bind address");

  // catalog
  auto* catalog_cmd = app.add_subcommand("catalog", "list or extend the URI catalog");
  std::string catalog_prefix, catalog_location;
  catalog_cmd->add_option("prefix", catalog_prefix, "URI prefix");
  catalog_cmd->add_option("location", catalog_location, "file path or URL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << std::endl;
    return kExitUsage;
  }

  if (validate->parsed()) {
    return dispatch(opt, [&] { return run_validate(opt, level, validate_paths); });
  }

  if (flatten_cmd->parsed()) {
    return dispatch(opt, [&] {
      Uri theory = parse_uri(flatten_uri);
      if (!opt.files.empty()) {
        TheoryGraph graph = opt.file_graph();
        Flattener flat(graph);
        std::cout << flat_document(flat, theory, include_meta);
      } else {
        Store store = opt.open_store();
        auto graph = store.load_graph({Uri(theory.doc)});
        Flattener flat(*graph);
        std::cout << flat_document(flat, theory, include_meta);
      }
      return kExitOk;
    });
  }

  if (deref_cmd->parsed()) {
    return dispatch(opt, [&] {
      if (!opt.files.empty()) {
        TheoryGraph graph = opt.file_graph();
        Flattener flat(graph);
        Uri uri = parse_uri(deref_uri);
        auto item = flat.deref(uri);
        if (!item.found()) throw Error(ErrorCode::NotFound, "nothing at this URI", uri.str());
        NotationSet defaults = default_notations();
        std::cout << render_item(flat, uri, defaults, RenderTarget::Text) << "\n";
        return kExitOk;
      }
      Store store = opt.open_store();
      Service service(store);
      std::cout << service.deref(deref_uri, self_contained).body;
      return kExitOk;
    });
  }

  if (query_cmd->parsed()) {
    return dispatch(opt, [&] {
      if (!opt.files.empty()) {
        print_uris(opt, query(opt.file_facts(), parse_uri(query_start), parse_rel_expr(query_rel)));
        return kExitOk;
      }
      Store store = opt.open_store();
      Service service(store);
      print_uris(opt, service.query_rel(query_start, query_rel));
      return kExitOk;
    });
  }

  if (cone_cmd->parsed()) {
    return dispatch(opt, [&] {
      if (cone_forward == cone_backward) {
        std::cerr << "cone: exactly one of --forward or --backward is required" << std::endl;
        return kExitUsage;
      }
      if (!opt.files.empty()) {
        FactIndex index(opt.file_facts());
        Uri module = parse_uri(cone_uri);
        auto uris = cone_forward ? forward_cone(index, module, !cone_one_step)
                                 : backward_cone(index, module, !cone_one_step);
        print_uris(opt, uris);
        return kExitOk;
      }
      Store store = opt.open_store();
      Service service(store);
      if (emit_omdoc) {
        std::cout << service.cone_document(cone_uri, cone_forward, cone_one_step);
      } else {
        print_uris(opt, service.cone(cone_uri, cone_forward, cone_one_step));
      }
      return kExitOk;
    });
  }

  if (present_cmd->parsed()) {
    return dispatch(opt, [&] {
      Store store = opt.open_store();
      Service service(store);
      std::cout << service.present(present_uri, present_style, present_format).body << "\n";
      return kExitOk;
    });
  }

  if (commit_cmd->parsed()) {
    return dispatch(opt, [&] {
      Store store = Store::exists(opt.store_dir) ? Store::open(opt.store_dir) : Store::init(opt.store_dir);
      std::vector<fs::path> files(commit_paths.begin(), commit_paths.end());
      Revision rev = store.commit(files, commit_message);
      std::cout << "revision " << rev.number << "\n";
      return kExitOk;
    });
  }

  if (rename_cmd->parsed()) {
    return dispatch(opt, [&] {
      Store store = opt.open_store();
      Revision rev = store.rename_module(parse_uri(rename_uri), LocalName::parse(rename_to));
      std::cout << "revision " << rev.number << "\n";
      return kExitOk;
    });
  }

  if (serve_cmd->parsed()) {
    return dispatch(opt, [&] {
      Store store = opt.open_store();
      Service service(store);
      std::cerr << "listening on " << host << ":" << port << std::endl;
      return service.serve(host, port);
    });
  }

  if (catalog_cmd->parsed()) {
    return dispatch(opt, [&] {
      Store store = opt.open_store();
      if (!catalog_prefix.empty() && !catalog_location.empty()) {
        store.catalog_add(catalog_prefix, catalog_location);
      }
      for (const auto& e : store.catalog()) {
        std::cout << e.prefix << "\t" << e.location << "\n";
      }
      return kExitOk;
    });
  }

  return kExitUsage;
}
