#pragma once
// Triple storage: an N-Triples subset parser, a subject-indexed in-memory
// store, forward closure over rdfs:subClassOf / rdf:type, and extraction of
// an entity's star of statements together with the labels of its terms.
//
// The index is built once, closed once, and then only read. All query
// functions are const over the closed index.

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "triscore/io.hpp"
#include "triscore/text.hpp"

namespace triscore {

struct Iri {
    std::string value;
    auto operator<=>(const Iri&) const = default;
};

struct Literal {
    std::string lexical;
    std::string lang;      // empty when untagged
    std::string datatype;  // datatype IRI kept as opaque text, empty when plain
    auto operator<=>(const Literal&) const = default;
};

using Term = std::variant<Iri, Literal>;

inline const Iri* term_iri(const Term& t) { return std::get_if<Iri>(&t); }
inline const Literal* term_literal(const Term& t) { return std::get_if<Literal>(&t); }

struct Triple {
    Iri subject;
    Iri predicate;
    Term object;
    auto operator<=>(const Triple&) const = default;
};

namespace vocab {
inline const Iri rdf_type{"http://www.w3.org/1999/02/22-rdf-syntax-ns#type"};
inline const Iri rdfs_label{"http://www.w3.org/2000/01/rdf-schema#label"};
inline const Iri rdfs_subclass_of{"http://www.w3.org/2000/01/rdf-schema#subClassOf"};
}  // namespace vocab

// ---------------------------------------------------------------- parsing

namespace detail {

class NtLineParser {
public:
    NtLineParser(std::string_view line, size_t line_no, const std::string& source)
        : s_(line), line_no_(line_no), source_(source) {}

    // Returns nothing for blank and comment lines.
    std::optional<Triple> parse() {
        skip_ws();
        if (eof() || peek() == '#') return std::nullopt;
        Triple t;
        t.subject = parse_iri();
        require_ws();
        t.predicate = parse_iri();
        require_ws();
        if (peek() == '<') {
            t.object = parse_iri();
        } else if (peek() == '"') {
            t.object = parse_literal();
        } else {
            fail("expected IRI or literal object");
        }
        skip_ws();
        if (eof() || take() != '.') fail("statement must end with '.'");
        skip_ws();
        if (!eof()) fail("trailing content after '.'");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(source_, line_no_, msg); }

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return eof() ? '\0' : s_[pos_]; }
    char take() { return s_[pos_++]; }

    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
    }

    void require_ws() {
        if (eof() || (peek() != ' ' && peek() != '\t')) fail("expected whitespace between terms");
        skip_ws();
    }

    Iri parse_iri() {
        if (eof() || take() != '<') fail("expected '<'");
        std::string value;
        while (true) {
            if (eof()) fail("unterminated IRI");
            char c = take();
            if (c == '>') break;
            if (c == ' ' || c == '\t' || c == '<') fail("whitespace or '<' inside IRI");
            value.push_back(c);
        }
        if (value.empty()) fail("empty IRI");
        return Iri{std::move(value)};
    }

    Literal parse_literal() {
        if (eof() || take() != '"') fail("expected '\"'");
        Literal lit;
        while (true) {
            if (eof()) fail("unterminated literal");
            char c = take();
            if (c == '"') break;
            if (c == '\\') {
                if (eof()) fail("dangling escape");
                char e = take();
                switch (e) {
                    case '"': lit.lexical.push_back('"'); break;
                    case '\\': lit.lexical.push_back('\\'); break;
                    case 'n': lit.lexical.push_back('\n'); break;
                    case 't': lit.lexical.push_back('\t'); break;
                    case 'r': lit.lexical.push_back('\r'); break;
                    default: fail(std::string("unsupported escape \\") + e);
                }
            } else {
                lit.lexical.push_back(c);
            }
        }
        if (!eof() && peek() == '@') {
            ++pos_;
            while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-'))
                lit.lang.push_back(take());
            if (lit.lang.empty()) fail("empty language tag");
        } else if (!eof() && peek() == '^') {
            ++pos_;
            if (eof() || take() != '^') fail("expected '^^'");
            lit.datatype = parse_iri().value;
        }
        return lit;
    }

    std::string_view s_;
    size_t pos_ = 0;
    size_t line_no_;
    const std::string& source_;
};

}  // namespace detail

// One Triple per statement line; blank lines and '#' comments are skipped.
// A malformed line raises ParseError carrying its line number.
inline std::vector<Triple> parse_ntriples(std::string_view text,
                                          const std::string& source = "<input>") {
    std::vector<Triple> out;
    size_t line_no = 0;
    for (const std::string& line : split_lines(text)) {
        ++line_no;
        if (auto t = detail::NtLineParser(line, line_no, source).parse()) out.push_back(std::move(*t));
    }
    return out;
}

inline std::string escape_literal(std::string_view lexical) {
    std::string out;
    out.reserve(lexical.size());
    for (char c : lexical) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

inline std::string to_ntriples(const Triple& t) {
    std::string out = "<" + t.subject.value + "> <" + t.predicate.value + "> ";
    if (const Iri* iri = term_iri(t.object)) {
        out += "<" + iri->value + ">";
    } else {
        const Literal& lit = *term_literal(t.object);
        out += "\"" + escape_literal(lit.lexical) + "\"";
        if (!lit.lang.empty()) out += "@" + lit.lang;
        else if (!lit.datatype.empty()) out += "^^<" + lit.datatype + ">";
    }
    out += " .";
    return out;
}

inline std::string to_ntriples(const std::vector<Triple>& triples) {
    std::string out;
    for (const Triple& t : triples) {
        out += to_ntriples(t);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------- indexing

struct GraphIndex {
    std::set<Triple> triples;
    std::map<Iri, std::set<Triple>> by_subject;
    std::map<Iri, std::set<std::string>> labels;      // lexical forms of rdfs:label objects
    std::map<Iri, std::set<Iri>> subclass_edges;      // direct rdfs:subClassOf
    bool closed = false;

    size_t size() const { return triples.size(); }
};

inline GraphIndex build_index(const std::vector<Triple>& triples) {
    GraphIndex g;
    for (const Triple& t : triples) {
        auto [it, inserted] = g.triples.insert(t);
        if (!inserted) continue;  // RDF graphs are sets
        g.by_subject[t.subject].insert(t);
        if (t.predicate == vocab::rdfs_label) {
            if (const Literal* lit = term_literal(t.object)) g.labels[t.subject].insert(lit->lexical);
        } else if (t.predicate == vocab::rdfs_subclass_of) {
            if (const Iri* obj = term_iri(t.object)) g.subclass_edges[t.subject].insert(*obj);
        }
    }
    return g;
}

inline std::set<std::string> labels_of(const GraphIndex& g, const Iri& term) {
    auto it = g.labels.find(term);
    return it == g.labels.end() ? std::set<std::string>{} : it->second;
}

// ---------------------------------------------------------------- closure

namespace detail {

// Classes reachable from `start` over one or more subclass edges.
// A class on a cycle reaches itself.
inline std::set<Iri> superclasses_of(const GraphIndex& g, const Iri& start) {
    std::set<Iri> seen;
    std::vector<Iri> stack;
    if (auto it = g.subclass_edges.find(start); it != g.subclass_edges.end())
        stack.assign(it->second.begin(), it->second.end());
    while (!stack.empty()) {
        Iri cur = stack.back();
        stack.pop_back();
        if (!seen.insert(cur).second) continue;
        if (auto it = g.subclass_edges.find(cur); it != g.subclass_edges.end())
            for (const Iri& next : it->second) stack.push_back(next);
    }
    return seen;
}

}  // namespace detail

// Materializes subclass transitivity and type propagation:
//   (A subClassOf B), (B subClassOf C)  =>  (A subClassOf C)
//   (x type A), (A subClassOf B)        =>  (x type B)
// Idempotent; terminates on subclass cycles (fixpoint over a finite set).
inline GraphIndex entail_closure(const GraphIndex& g) {
    std::vector<Triple> all(g.triples.begin(), g.triples.end());

    std::map<Iri, std::set<Iri>> ancestors;
    for (const auto& [cls, direct] : g.subclass_edges)
        ancestors[cls] = detail::superclasses_of(g, cls);

    for (const auto& [cls, ancs] : ancestors)
        for (const Iri& anc : ancs)
            all.push_back(Triple{cls, vocab::rdfs_subclass_of, Term{anc}});

    for (const Triple& t : g.triples) {
        if (t.predicate != vocab::rdf_type) continue;
        const Iri* cls = term_iri(t.object);
        if (!cls) continue;
        if (auto it = ancestors.find(*cls); it != ancestors.end())
            for (const Iri& anc : it->second)
                all.push_back(Triple{t.subject, vocab::rdf_type, Term{anc}});
    }

    GraphIndex out = build_index(all);
    out.closed = true;
    return out;
}

// ---------------------------------------------------------------- SCC

// The star of statements whose subject is a given entity, plus the
// rdfs:label triples of every predicate and IRI object appearing in it.
struct Scc {
    Iri subject;
    std::vector<Triple> triples;  // sorted, deduplicated

    bool empty() const { return triples.empty(); }

    std::vector<Triple> star() const {
        std::vector<Triple> out;
        for (const Triple& t : triples)
            if (t.subject == subject) out.push_back(t);
        return out;
    }

    // Labels of a term as recorded inside this component.
    std::set<std::string> term_labels(const Iri& term) const {
        std::set<std::string> out;
        for (const Triple& t : triples)
            if (t.subject == term && t.predicate == vocab::rdfs_label)
                if (const Literal* lit = term_literal(t.object)) out.insert(lit->lexical);
        return out;
    }
};

namespace detail {

inline void add_label_triples(const GraphIndex& g, const Iri& term, std::set<Triple>& acc) {
    auto it = g.by_subject.find(term);
    if (it == g.by_subject.end()) return;
    for (const Triple& t : it->second)
        if (t.predicate == vocab::rdfs_label && term_literal(t.object)) acc.insert(t);
}

inline Scc scc_impl(const GraphIndex& g, const Iri& subject,
                    const std::set<Iri>* allowed_predicates) {
    if (!g.closed) throw std::logic_error("scc requires a closed index; run entail_closure first");
    std::set<Triple> acc;
    if (auto it = g.by_subject.find(subject); it != g.by_subject.end()) {
        for (const Triple& t : it->second) {
            if (allowed_predicates && !allowed_predicates->contains(t.predicate)) continue;
            acc.insert(t);
        }
    }
    std::set<Triple> star = acc;
    for (const Triple& t : star) {
        add_label_triples(g, t.predicate, acc);
        if (const Iri* obj = term_iri(t.object)) add_label_triples(g, *obj, acc);
    }
    return Scc{subject, std::vector<Triple>(acc.begin(), acc.end())};
}

}  // namespace detail

// An unknown subject yields an empty component, not an error.
inline Scc scc(const GraphIndex& g, const Iri& subject) {
    return detail::scc_impl(g, subject, nullptr);
}

// Same, keeping only star triples whose predicate is in the given set.
inline Scc scc_filtered(const GraphIndex& g, const Iri& subject,
                        const std::set<Iri>& allowed_predicates) {
    return detail::scc_impl(g, subject, &allowed_predicates);
}

}  // namespace triscore
