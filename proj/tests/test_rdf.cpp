// Triple parsing, indexing, closure, and component extraction.

#include <set>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "triscore/rdf.hpp"

using namespace triscore;

namespace {

Triple t_iri(std::string s, std::string p, std::string o) {
    return Triple{Iri{std::move(s)}, Iri{std::move(p)}, Term{Iri{std::move(o)}}};
}

Triple t_lit(std::string s, std::string p, std::string o) {
    return Triple{Iri{std::move(s)}, Iri{std::move(p)}, Term{Literal{std::move(o), "", ""}}};
}

Triple label_of(std::string s, std::string text) {
    return t_lit(std::move(s), vocab::rdfs_label.value, std::move(text));
}

}  // namespace

TEST_CASE("parses IRIs, language tags, and datatypes", "[rdf]") {
    std::vector<Triple> ts = parse_ntriples(
        "<http://x/a> <http://x/p> <http://x/b> .\n"
        "<http://x/a> <http://www.w3.org/2000/01/rdf-schema#label> \"Ada\"@en .\n"
        "<http://x/a> <http://x/q> \"3\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n");
    REQUIRE(ts.size() == 3);
    CHECK(ts[0].subject.value == "http://x/a");
    CHECK(ts[0].predicate.value == "http://x/p");
    REQUIRE(term_iri(ts[0].object));
    CHECK(term_iri(ts[0].object)->value == "http://x/b");

    const Literal* tagged = term_literal(ts[1].object);
    REQUIRE(tagged);
    CHECK(tagged->lexical == "Ada");
    CHECK(tagged->lang == "en");
    CHECK(tagged->datatype.empty());

    const Literal* typed = term_literal(ts[2].object);
    REQUIRE(typed);
    CHECK(typed->lexical == "3");
    CHECK(typed->lang.empty());
    CHECK(typed->datatype == "http://www.w3.org/2001/XMLSchema#integer");
}

TEST_CASE("skips blank lines and comments, tolerates extra spacing", "[rdf]") {
    std::vector<Triple> ts = parse_ntriples(
        "\n"
        "# a comment line\n"
        "   \t  \n"
        "  <http://x/a>\t\t<http://x/p>   <http://x/b>  .  \n");
    REQUIRE(ts.size() == 1);
    CHECK(ts[0] == t_iri("http://x/a", "http://x/p", "http://x/b"));
}

TEST_CASE("decodes literal escapes and re-encodes them", "[rdf]") {
    std::string line = "<http://x/a> <http://x/p> \"a\\\"b\\\\c\\nd\\te\\rf\" .";
    std::vector<Triple> ts = parse_ntriples(line);
    REQUIRE(ts.size() == 1);
    const Literal* lit = term_literal(ts[0].object);
    REQUIRE(lit);
    CHECK(lit->lexical == "a\"b\\c\nd\te\rf");

    // Round trip: serialize and parse back to the identical triple.
    std::vector<Triple> again = parse_ntriples(to_ntriples(ts));
    REQUIRE(again.size() == 1);
    CHECK(again[0] == ts[0]);
}

TEST_CASE("serialization round-trips tags and datatypes", "[rdf]") {
    std::vector<Triple> ts;
    ts.push_back(t_iri("http://x/s", "http://x/p", "http://x/o"));
    ts.push_back(Triple{Iri{"http://x/s"}, vocab::rdfs_label, Term{Literal{"müller", "de", ""}}});
    ts.push_back(Triple{Iri{"http://x/s"}, Iri{"http://x/q"},
                        Term{Literal{"42", "", "http://www.w3.org/2001/XMLSchema#int"}}});
    std::vector<Triple> again = parse_ntriples(to_ntriples(ts));
    CHECK(std::set<Triple>(again.begin(), again.end()) == std::set<Triple>(ts.begin(), ts.end()));
}

TEST_CASE("reports malformed lines with their line number", "[rdf]") {
    auto expect_error = [](std::string_view text, size_t line) {
        try {
            parse_ntriples(text, "doc.nt");
            FAIL("expected a parse error for: " << text);
        } catch (const ParseError& e) {
            CHECK(e.line() == line);
            CHECK(e.source() == "doc.nt");
        }
    };
    expect_error("<http://x/a> <http://x/p> <http://x/b>\n", 1);            // missing '.'
    expect_error("<http://x/a> <http://x/p> .\n", 1);                       // missing object
    expect_error("<http://x/ok> <http://x/p> <http://x/o> .\n<http://x/a <http://x/p> <http://x/b> .\n", 2);
    expect_error("<> <http://x/p> <http://x/b> .\n", 1);                    // empty IRI
    expect_error("<http://x/a> <http://x/p> \"unterminated .\n", 1);
    expect_error("<http://x/a> <http://x/p> \"bad\\zescape\" .\n", 1);
    expect_error("<http://x/a> <http://x/p> \"x\"@ .\n", 1);                // empty language tag
    expect_error("<http://x/a> <http://x/p> <http://x/b> . trailing\n", 1);
    expect_error("<http://x/a><http://x/p> <http://x/b> .\n", 1);           // missing separator
}

TEST_CASE("build_index groups by subject and extracts labels and subclass edges", "[rdf]") {
    std::vector<Triple> ts = {
        t_iri("http://x/a", "http://x/p", "http://x/b"),
        t_iri("http://x/a", "http://x/p", "http://x/b"),  // duplicate statement
        label_of("http://x/a", "alpha"),
        label_of("http://x/a", "alef"),
        t_iri("http://x/c", vocab::rdfs_subclass_of.value, "http://x/d"),
        // label with an IRI object carries no lexical form: stored, not indexed
        t_iri("http://x/a", vocab::rdfs_label.value, "http://x/b"),
    };
    GraphIndex g = build_index(ts);
    CHECK(g.size() == 5);  // duplicate collapsed
    CHECK(g.by_subject.at(Iri{"http://x/a"}).size() == 4);
    CHECK(labels_of(g, Iri{"http://x/a"}) == std::set<std::string>{"alef", "alpha"});
    CHECK(labels_of(g, Iri{"http://x/b"}).empty());
    CHECK(g.subclass_edges.at(Iri{"http://x/c"}).contains(Iri{"http://x/d"}));
    CHECK_FALSE(g.closed);
}

TEST_CASE("closure materializes subclass chains and propagates types", "[rdf]") {
    std::vector<Triple> ts = {
        t_iri("http://x/A", vocab::rdfs_subclass_of.value, "http://x/B"),
        t_iri("http://x/B", vocab::rdfs_subclass_of.value, "http://x/C"),
        t_iri("http://x/i", vocab::rdf_type.value, "http://x/A"),
    };
    GraphIndex closed = entail_closure(build_index(ts));
    CHECK(closed.closed);
    CHECK(closed.triples.contains(t_iri("http://x/A", vocab::rdfs_subclass_of.value, "http://x/C")));
    CHECK(closed.triples.contains(t_iri("http://x/i", vocab::rdf_type.value, "http://x/B")));
    CHECK(closed.triples.contains(t_iri("http://x/i", vocab::rdf_type.value, "http://x/C")));
    CHECK(closed.size() == 6);

    // Idempotent: closing again adds nothing.
    GraphIndex twice = entail_closure(closed);
    CHECK(twice.triples == closed.triples);
}

TEST_CASE("closure turns subclass cycles into self-loops and terminates", "[rdf]") {
    std::vector<Triple> ts = {
        t_iri("http://x/A", vocab::rdfs_subclass_of.value, "http://x/B"),
        t_iri("http://x/B", vocab::rdfs_subclass_of.value, "http://x/A"),
        t_iri("http://x/i", vocab::rdf_type.value, "http://x/A"),
    };
    GraphIndex closed = entail_closure(build_index(ts));
    CHECK(closed.triples.contains(t_iri("http://x/A", vocab::rdfs_subclass_of.value, "http://x/A")));
    CHECK(closed.triples.contains(t_iri("http://x/B", vocab::rdfs_subclass_of.value, "http://x/B")));
    CHECK(closed.triples.contains(t_iri("http://x/i", vocab::rdf_type.value, "http://x/B")));
    CHECK(closed.triples == oracles::naive_closure(ts));
}

TEST_CASE("closure equals the fixpoint oracle on random graphs", "[rdf]") {
    oracles::TestRng rng(7101);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Triple> ts = oracles::random_graph(rng, 120);
        GraphIndex closed = entail_closure(build_index(ts));
        CHECK(closed.triples == oracles::naive_closure(ts));
        CHECK(entail_closure(closed).triples == closed.triples);
    }
}

TEST_CASE("scc gathers the star plus the labels of its terms", "[rdf]") {
    std::vector<Triple> ts = {
        t_iri("http://x/s", "http://x/p", "http://x/o"),
        label_of("http://x/s", "subject"),
        label_of("http://x/p", "pred"),
        label_of("http://x/o", "object"),
        label_of("http://x/unrelated", "noise"),
        t_iri("http://x/other", "http://x/p", "http://x/s"),
    };
    GraphIndex g = entail_closure(build_index(ts));
    Scc comp = scc(g, Iri{"http://x/s"});
    REQUIRE_FALSE(comp.empty());

    std::set<Triple> got(comp.triples.begin(), comp.triples.end());
    CHECK(got.contains(t_iri("http://x/s", "http://x/p", "http://x/o")));
    CHECK(got.contains(label_of("http://x/s", "subject")));
    CHECK(got.contains(label_of("http://x/p", "pred")));
    CHECK(got.contains(label_of("http://x/o", "object")));
    CHECK_FALSE(got.contains(label_of("http://x/unrelated", "noise")));
    // Statements pointing *at* the subject are not part of its star.
    CHECK_FALSE(got.contains(t_iri("http://x/other", "http://x/p", "http://x/s")));

    // star() keeps only subject-rooted statements; term_labels reads the rest.
    for (const Triple& t : comp.star()) CHECK(t.subject == comp.subject);
    CHECK(comp.term_labels(Iri{"http://x/o"}) == std::set<std::string>{"object"});
    CHECK(comp.term_labels(Iri{"http://x/p"}) == std::set<std::string>{"pred"});
}

TEST_CASE("scc_filtered keeps only allowed predicates", "[rdf]") {
    std::vector<Triple> ts = {
        t_iri("http://x/s", "http://x/keep", "http://x/o1"),
        t_iri("http://x/s", "http://x/drop", "http://x/o2"),
        label_of("http://x/o1", "kept object"),
        label_of("http://x/o2", "dropped object"),
    };
    GraphIndex g = entail_closure(build_index(ts));
    Scc comp = scc_filtered(g, Iri{"http://x/s"}, {Iri{"http://x/keep"}});
    std::set<Triple> got(comp.triples.begin(), comp.triples.end());
    CHECK(got.contains(t_iri("http://x/s", "http://x/keep", "http://x/o1")));
    CHECK(got.contains(label_of("http://x/o1", "kept object")));
    CHECK_FALSE(got.contains(t_iri("http://x/s", "http://x/drop", "http://x/o2")));
    CHECK_FALSE(got.contains(label_of("http://x/o2", "dropped object")));
    CHECK(comp.star().size() == 1);
}

TEST_CASE("scc requires a closed index and tolerates unknown subjects", "[rdf]") {
    GraphIndex open = build_index({t_iri("http://x/s", "http://x/p", "http://x/o")});
    CHECK_THROWS_AS(scc(open, Iri{"http://x/s"}), std::logic_error);

    GraphIndex closed = entail_closure(open);
    CHECK(scc(closed, Iri{"http://x/nobody"}).empty());
}

TEST_CASE("scc sees entailed types, not just asserted ones", "[rdf]") {
    std::vector<Triple> ts = {
        t_iri("http://x/i", vocab::rdf_type.value, "http://x/A"),
        t_iri("http://x/A", vocab::rdfs_subclass_of.value, "http://x/B"),
        label_of("http://x/B", "broader"),
    };
    GraphIndex g = entail_closure(build_index(ts));
    Scc comp = scc(g, Iri{"http://x/i"});
    std::set<Triple> got(comp.triples.begin(), comp.triples.end());
    CHECK(got.contains(t_iri("http://x/i", vocab::rdf_type.value, "http://x/B")));
    CHECK(got.contains(label_of("http://x/B", "broader")));
}
