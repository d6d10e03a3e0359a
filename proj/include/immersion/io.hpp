#pragma once

// File formats: DIMACS-flavored graph files ("p graph n m" + "e u v" lines,
// 1-based) and JSON certificate files. Parsing is the only place 1-based
// indices exist; everything in memory is 0-based.

#include <iosfwd>
#include <string>

#include "immersion/certify.hpp"
#include "immersion/multigraph.hpp"

namespace immersion {

MultiGraph parse_graph(std::istream& in);
MultiGraph read_graph_file(const std::string& path);
std::string emit_graph(const MultiGraph& g);
void write_graph_file(const std::string& path, const MultiGraph& g);

ImmersionCertificate parse_certificate(std::istream& in);
ImmersionCertificate read_certificate_file(const std::string& path);
std::string emit_certificate(const ImmersionCertificate& cert);
void write_certificate_file(const std::string& path, const ImmersionCertificate& cert);

}  // namespace immersion
