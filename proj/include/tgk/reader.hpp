#pragma once

#include <string>
#include <string_view>

#include "tgk/model.hpp"
#include "tgk/xml.hpp"

namespace tgk {

// Parses the concrete XML syntax into a document. All URIs come out
// absolute, resolved against the document base and the enclosing
// declaration. Raises GrammarError (with a source position) or
// MalformedUri.
Document parse_document(std::string_view bytes, const Uri& expected_base,
                        const std::string& filename = "<input>");

// Like parse_document but takes the base from the root element alone.
Document parse_document_auto(std::string_view bytes, const std::string& filename = "<input>");

// Canonical serialization; URIs into the same document are relativized.
std::string serialize_document(const Document& doc);

// Morphism attribute syntax: import paths as theory-uri?path, view URIs,
// id(theory-uri), and ';' for diagram-order composition.
Morphism parse_morphism(std::string_view text, const Uri& base);
std::string format_morphism(const Morphism& m);

// Term element trees (OMS / OMV / OMA / OMBIND).
Term term_from_xml(const XmlNode& node, const Uri& base);
XmlNode term_to_xml(const Term& t, const Uri& base);

}  // namespace tgk
