#include <stdexcept>
#include <algorithm>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "metrics.hpp"
#include "routing.hpp"

using namespace prosa;
using test::add_al;
using test::add_peer;

namespace {

RoutingParams params_with(double doc_thr = 0.5, double flood_thr = 0.5) {
    RoutingParams p;
    p.doc_threshold = doc_thr;
    p.flood_threshold = flood_thr;
    return p;
}

QueryMessage query(const TermVector& q, PeerId source, std::uint32_t n_r = 1,
                   std::uint64_t qid = 0) {
    return QueryMessage{qid, q, source, n_r};
}

}  // namespace

TEST_CASE("resources_relevance: peer with zero resources") {
    Corpus c = test::orthogonal_corpus(2);
    Network net(1);
    add_peer(net, 0, c);
    auto res = resources_relevance(net.peer(0), c.documents[0].vector, 3, params_with(), c);
    CHECK(res.matches.empty());
    CHECK(res.num_res == 0);
}

TEST_CASE("resources_relevance: a hosted document identical to the query matches") {
    Corpus c = test::orthogonal_corpus(3);
    Network net(1);
    add_peer(net, 0, c, {1});
    auto res = resources_relevance(net.peer(0), c.documents[1].vector, 5, params_with(0.5), c);
    REQUIRE(res.matches == std::vector<DocId>{1});
    CHECK(res.num_res == 1);
}

TEST_CASE("resources_relevance: 5 matches with needed=3 truncates and caps numRes") {
    // Doc vectors: one shared term t0 plus a private term each, so every doc
    // has the same positive cosine with q = {t0}; ranking falls to doc id.
    std::vector<CountedDoc> docs;
    for (int i = 0; i < 5; ++i) {
        docs.push_back({"math", {{"shared", 1}, {"p" + std::to_string(i), 1}}});
    }
    docs.push_back({"math", {{"other", 1}}});  // keeps idf("shared") positive
    Corpus c = build_corpus_from_counts(docs);
    Network net(1);
    add_peer(net, 0, c, {0, 1, 2, 3, 4});
    TermVector q = test::unit({{c.vocabulary.at("shared"), 1.0}});
    auto res = resources_relevance(net.peer(0), q, 3, params_with(0.1), c);
    CHECK(res.matches == std::vector<DocId>{0, 1, 2});
    CHECK(res.num_res == 3);
}

TEST_CASE("resources_relevance sorts by similarity before doc id") {
    Corpus c = build_corpus_from_counts({{"math", {{"a", 1}}},
                                         {"math", {{"a", 3}, {"b", 1}}},
                                         {"math", {{"c", 1}}}});
    Network net(1);
    add_peer(net, 0, c, {0, 1});
    TermVector q = c.documents[0].vector;  // pure "a"
    auto res = resources_relevance(net.peer(0), q, 5, params_with(0.1), c);
    REQUIRE(res.matches.size() == 2);
    CHECK(res.matches[0] == 0);  // cosine 1.0 beats doc 1's partial match
    CHECK(res.matches[1] == 1);
}

TEST_CASE("peer_relevance: AL is 0, FSL equal to q is 1, TSL hand example") {
    TermVector q = test::tv({{2, 1.0}});
    CHECK(peer_relevance(LinkLabel{LinkKind::AL, {}, 0}, q) == 0.0);
    CHECK(test::approx_eq(peer_relevance(LinkLabel{LinkKind::FSL, q, 0}, q), 1.0));
    LinkLabel tsl{LinkKind::TSL, test::tv({{1, 0.6}, {2, 0.8}}), 1};
    CHECK(test::approx_eq(peer_relevance(tsl, q), 0.8));
}

TEST_CASE("select_next_peer: only ALs gives a uniform random unvisited target") {
    Corpus c = test::orthogonal_corpus(1);
    Network net(1);
    for (PeerId id = 0; id < 4; ++id) add_peer(net, id, c);
    for (PeerId t = 1; t < 4; ++t) add_al(net, 0, t);
    TermVector q = test::unit({{0, 1.0}});
    std::set<PeerId> chosen;
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        auto next = select_next_peer(net.peer(0), q, {0}, rng);
        REQUIRE(next.has_value());
        CHECK(*next >= 1);
        CHECK(*next <= 3);
        chosen.insert(*next);
    }
    CHECK(chosen.size() == 3);  // every target reachable across draws
}

TEST_CASE("select_next_peer prefers the highest-relevance semantic link") {
    Corpus c = test::orthogonal_corpus(1);
    Network net(1);
    for (PeerId id = 0; id < 4; ++id) add_peer(net, id, c);
    TermVector q = test::unit({{7, 1.0}});
    add_al(net, 0, 1);
    add_al(net, 0, 2);
    net.peer(0).out_links[3] = LinkLabel{LinkKind::FSL, test::unit({{7, 0.9}, {8, 0.4}}), 0};
    Rng rng(3);
    auto next = select_next_peer(net.peer(0), q, {0}, rng);
    REQUIRE(next.has_value());
    CHECK(*next == 3);
}

TEST_CASE("select_next_peer breaks relevance ties by ascending peer id") {
    Corpus c = test::orthogonal_corpus(1);
    Network net(1);
    for (PeerId id = 0; id < 3; ++id) add_peer(net, id, c);
    TermVector q = test::unit({{7, 1.0}});
    net.peer(0).out_links[2] = LinkLabel{LinkKind::TSL, q, 1};
    net.peer(0).out_links[1] = LinkLabel{LinkKind::TSL, q, 1};
    Rng rng(3);
    CHECK(select_next_peer(net.peer(0), q, {0}, rng) == PeerId{1});
}

TEST_CASE("select_next_peer returns nothing when every target is visited") {
    Corpus c = test::orthogonal_corpus(1);
    Network net(1);
    add_peer(net, 0, c);
    add_peer(net, 1, c);
    add_al(net, 0, 1);
    Rng rng(3);
    CHECK(!select_next_peer(net.peer(0), test::unit({{0, 1.0}}), {0, 1}, rng).has_value());
}

// Line fixture 0 -> 1 -> 2 -> 3 -> 4 where only peer `holder` has a document
// matching q = that document's vector.
static Network line_fixture(const Corpus& c, PeerId holder, DocId doc) {
    Network net(1);
    for (PeerId id = 0; id < 5; ++id) {
        add_peer(net, id, c, id == holder ? std::vector<DocId>{doc} : std::vector<DocId>{});
    }
    for (PeerId id = 0; id + 1 < 5; ++id) add_al(net, id, id + 1);
    return net;
}

TEST_CASE("prosa: source holding n_r matches answers locally") {
    Corpus c = test::orthogonal_corpus(3);
    Network net(1);
    add_peer(net, 0, c, {0, 1});
    add_peer(net, 1, c, {2});
    add_al(net, 0, 1);
    // Query matching both of the source's docs through a shared-direction
    // vector: use doc 0's vector with n_r=1 so the source alone suffices.
    auto out = exec_query_prosa(net, query(c.documents[0].vector, 0, 1), params_with(0.5), c);
    CHECK(out.answered);
    CHECK(out.retrieved == std::set<std::pair<PeerId, DocId>>{{0, 0}});
    CHECK(out.deepness == 0);
    CHECK(out.used_links.empty());
    CHECK(out.visited_nodes == std::vector<PeerId>{0});
}

TEST_CASE("prosa: no matches and no out-links is a dead end at the source") {
    Corpus c = test::orthogonal_corpus(2);
    Network net(1);
    add_peer(net, 0, c);
    add_peer(net, 1, c, {1});
    auto out = exec_query_prosa(net, query(c.documents[1].vector, 0, 1), params_with(), c);
    CHECK(!out.answered);
    CHECK(out.visited_nodes == std::vector<PeerId>{0});
    CHECK(out.used_links.empty());
    CHECK(out.deepness == 0);
}

TEST_CASE("prosa: 5-peer line, match at the third peer") {
    Corpus c = test::orthogonal_corpus(2);
    Network net = line_fixture(c, 2, 0);
    TermVector q = c.documents[0].vector;
    auto out = exec_query_prosa(net, query(q, 0, 1), params_with(0.5), c);

    CHECK(out.answered);
    CHECK(out.retrieved == std::set<std::pair<PeerId, DocId>>{{2, 0}});
    CHECK(out.deepness == 2);
    CHECK(out.visited_nodes == std::vector<PeerId>{0, 1, 2});
    CHECK(out.used_links == std::vector<std::pair<PeerId, PeerId>>{{0, 1}, {1, 2}});

    // Link side effects: responder FSL from the source, TSLs back to it.
    CHECK(net.peer(0).out_links.at(2).kind == LinkKind::FSL);
    CHECK(net.peer(1).out_links.at(0).kind == LinkKind::TSL);
    CHECK(net.peer(2).out_links.at(0).kind == LinkKind::TSL);
}

TEST_CASE("prosa: partial answer triggers semantic flooding with reduced budget") {
    // Source -> hub; hub holds 1 match and has high-relevance FSLs to two
    // holders, each with 1 match. n_r = 3 wants all of them.
    std::vector<CountedDoc> docs;
    for (int i = 0; i < 3; ++i) {
        docs.push_back({"math", {{"shared", 1}, {"p" + std::to_string(i), 1}}});
    }
    docs.push_back({"math", {{"other", 1}}});
    Corpus c = build_corpus_from_counts(docs);
    TermVector q = test::unit({{c.vocabulary.at("shared"), 1.0}});

    Network net(1);
    add_peer(net, 0, c);
    add_peer(net, 1, c, {0});
    add_peer(net, 2, c, {1});
    add_peer(net, 3, c, {2});
    add_al(net, 0, 1);
    net.peer(1).out_links[2] = LinkLabel{LinkKind::FSL, net.peer(2).pk, 0};
    net.peer(1).out_links[3] = LinkLabel{LinkKind::FSL, net.peer(3).pk, 0};

    auto out = exec_query_prosa(net, query(q, 0, 3), params_with(0.1, 0.1), c);
    CHECK(out.answered);
    CHECK(out.retrieved ==
          std::set<std::pair<PeerId, DocId>>{{1, 0}, {2, 1}, {3, 2}});
    // Chain hop to the hub (1), flood to the holders (2), plus the holders'
    // own flood step back toward the source (3): the source's TSL carries the
    // query itself, so its relevance is 1 and it receives duplicate copies.
    CHECK(out.deepness == 3);
    // Both holders respond, so both earn an FSL from the source.
    CHECK(net.peer(0).out_links.at(1).kind == LinkKind::FSL);
    CHECK(net.peer(0).out_links.at(2).kind == LinkKind::FSL);
    CHECK(net.peer(0).out_links.at(3).kind == LinkKind::FSL);
}

TEST_CASE("prosa: a fully answered query does not flood") {
    Corpus c = test::orthogonal_corpus(2);
    Network net(1);
    add_peer(net, 0, c);
    add_peer(net, 1, c, {0});
    add_peer(net, 2, c, {0});
    add_al(net, 0, 1);
    net.peer(1).out_links[2] = LinkLabel{LinkKind::FSL, net.peer(2).pk, 0};
    auto out = exec_query_prosa(net, query(c.documents[0].vector, 0, 1), params_with(0.5, 0.0), c);
    CHECK(out.retrieved == std::set<std::pair<PeerId, DocId>>{{1, 0}});
    CHECK(out.deepness == 1);
    CHECK(out.visited_nodes == std::vector<PeerId>{0, 1});
}

TEST_CASE("prosa: max_hops bounds the forwarding chain") {
    Corpus c = test::orthogonal_corpus(2);
    Network net = line_fixture(c, 4, 0);
    RoutingParams p = params_with(0.5);
    p.max_hops = 2;
    auto out = exec_query_prosa(net, query(c.documents[0].vector, 0, 1), p, c);
    CHECK(!out.answered);
    CHECK(out.deepness <= 2);
    CHECK(out.visited_nodes.size() <= 3);
}

TEST_CASE("prosa: duplicate deliveries count toward used_links but not visited") {
    // Hub floods to two peers that both link onward to the same third peer.
    std::vector<CountedDoc> docs;
    for (int i = 0; i < 4; ++i) {
        docs.push_back({"math", {{"shared", 1}, {"p" + std::to_string(i), 1}}});
    }
    docs.push_back({"math", {{"other", 1}}});
    Corpus c = build_corpus_from_counts(docs);
    TermVector q = test::unit({{c.vocabulary.at("shared"), 1.0}});

    Network net(1);
    for (PeerId id = 0; id < 4; ++id) {
        add_peer(net, id, c, {static_cast<DocId>(id)});
    }
    net.peer(0).out_links[1] = LinkLabel{LinkKind::FSL, net.peer(1).pk, 0};
    net.peer(0).out_links[2] = LinkLabel{LinkKind::FSL, net.peer(2).pk, 0};
    net.peer(1).out_links[3] = LinkLabel{LinkKind::FSL, net.peer(3).pk, 0};
    net.peer(2).out_links[3] = LinkLabel{LinkKind::FSL, net.peer(3).pk, 0};

    auto out = exec_query_prosa(net, query(q, 0, 100), params_with(0.1, 0.1), c);
    // Peer 3 is delivered twice (once per parent) but processes once.
    CHECK(std::count(out.visited_nodes.begin(), out.visited_nodes.end(), 3) == 1);
    int deliveries_to_3 = 0;
    for (const auto& [from, to] : out.used_links) {
        if (to == 3) ++deliveries_to_3;
    }
    CHECK(deliveries_to_3 == 2);
}

TEST_CASE("flooding: n_r matches at the source means no forwarding") {
    Corpus c = test::orthogonal_corpus(2);
    Network net(1);
    add_peer(net, 0, c, {0});
    add_peer(net, 1, c, {1});
    add_al(net, 0, 1);
    auto out = exec_query_flood(net, query(c.documents[0].vector, 0, 1), params_with(0.5), c);
    CHECK(out.retrieved == std::set<std::pair<PeerId, DocId>>{{0, 0}});
    CHECK(out.deepness == 0);
    CHECK(out.used_links.empty());
}

TEST_CASE("flooding: matches at level 2 equal the reachable oracle set") {
    // 0 -> {1,2} -> {3..6}; docs matching q sit on peers 3 and 5.
    Corpus c = test::orthogonal_corpus(2);
    Network net(1);
    for (PeerId id = 0; id < 7; ++id) add_peer(net, id, c);
    net.peer(3).resources = {0};
    net.peer(3).pk = peer_knowledge({0}, c, c.vector_cap);
    net.peer(5).resources = {0};
    net.peer(5).pk = peer_knowledge({0}, c, c.vector_cap);
    add_al(net, 0, 1);
    add_al(net, 0, 2);
    add_al(net, 1, 3);
    add_al(net, 1, 4);
    add_al(net, 2, 5);
    add_al(net, 2, 6);
    RoutingParams p = params_with(0.5);
    auto out = exec_query_flood(net, query(c.documents[0].vector, 0, 10), p, c);
    auto oracle = oracle_matching(net, c.documents[0].vector, p, c);
    CHECK(out.retrieved == oracle);
    CHECK(out.deepness == 2);
}

TEST_CASE("flooding: a disconnected matching peer is never retrieved") {
    Corpus c = test::orthogonal_corpus(2);
    Network net(1);
    add_peer(net, 0, c);
    add_peer(net, 1, c);
    add_peer(net, 2, c, {0});  // match, but unreachable
    add_al(net, 0, 1);
    auto out = exec_query_flood(net, query(c.documents[0].vector, 0, 5), params_with(0.5), c);
    CHECK(!out.answered);
    CHECK(out.retrieved.empty());
}

TEST_CASE("flooding: ttl bounds the propagation depth") {
    Corpus c = test::orthogonal_corpus(2);
    Network net = line_fixture(c, 4, 0);
    RoutingParams p = params_with(0.5);
    p.flood_ttl = 2;
    auto out = exec_query_flood(net, query(c.documents[0].vector, 0, 1), p, c);
    CHECK(!out.answered);
    CHECK(out.deepness == 2);
}

TEST_CASE("random walk: isolated source with no matches answers false in 0 steps") {
    Corpus c = test::orthogonal_corpus(2);
    Network net(1);
    add_peer(net, 0, c);
    add_peer(net, 1, c, {1});
    Rng rng(5);
    auto out = exec_query_rw(net, query(c.documents[1].vector, 0, 1), params_with(), c, rng);
    CHECK(!out.answered);
    CHECK(out.used_links.empty());
    CHECK(out.visited_nodes == std::vector<PeerId>{0});
}

TEST_CASE("random walk: 3-cycle with no matches terminates by ttl") {
    Corpus c = test::orthogonal_corpus(2);
    Network net(1);
    for (PeerId id = 0; id < 3; ++id) add_peer(net, id, c);
    for (PeerId id = 0; id < 3; ++id) add_al(net, id, (id + 1) % 3);
    RoutingParams p = params_with(0.5);
    p.rw_ttl = 10;
    Rng rng(5);
    auto out = exec_query_rw(net, query(c.documents[0].vector, 0, 1), p, c, rng);
    CHECK(!out.answered);
    CHECK(out.used_links.size() == 10);
    CHECK(out.visited_nodes.size() <= 3);
}

TEST_CASE("random walk: all n_r matches at the first neighbor gives walk length 1") {
    Corpus c = test::orthogonal_corpus(2);
    Network net(1);
    add_peer(net, 0, c);
    add_peer(net, 1, c, {0});
    add_al(net, 0, 1);
    Rng rng(5);
    auto out = exec_query_rw(net, query(c.documents[0].vector, 0, 1), params_with(0.5), c, rng);
    CHECK(out.answered);
    CHECK(out.used_links.size() == 1);
    CHECK(out.deepness == 1);
}

TEST_CASE("baselines leave the overlay untouched") {
    Corpus c = test::orthogonal_corpus(4);
    Network net(8);
    for (PeerId id = 0; id < 8; ++id) {
        Peer p;
        p.id = id;
        p.resources = {static_cast<DocId>(id % 4)};
        p.pk = peer_knowledge(p.resources, c, net.vector_cap());
        net.join(std::move(p), 2);
    }
    const std::string before = network_snapshot_json(net);
    RoutingParams p = params_with(0.5);
    Rng rng(9);
    for (DocId d = 0; d < 4; ++d) {
        exec_query_flood(net, query(c.documents[d].vector, d, 2, d), p, c);
        exec_query_rw(net, query(c.documents[d].vector, d, 2, d + 10), p, c, rng);
    }
    CHECK(network_snapshot_json(net) == before);
}

TEST_CASE("prosa post-conditions: responder FSLs and backward TSL/FSLs") {
    Corpus c = test::orthogonal_corpus(6);
    Network net(3);
    for (PeerId id = 0; id < 12; ++id) {
        Peer p;
        p.id = id;
        p.resources = {static_cast<DocId>(id % 6)};
        p.pk = peer_knowledge(p.resources, c, net.vector_cap());
        net.join(std::move(p), 3);
    }
    RoutingParams p = params_with(0.5, 0.2);
    for (std::uint64_t qid = 0; qid < 24; ++qid) {
        const PeerId source = static_cast<PeerId>(qid % 12);
        const TermVector& q = c.documents[qid % 6].vector;
        auto out = exec_query_prosa(net, query(q, source, 3, qid), p, c);
        for (const auto& [holder, doc] : out.retrieved) {
            if (holder == source) continue;
            REQUIRE(net.peer(source).out_links.count(holder) == 1);
            CHECK(net.peer(source).out_links.at(holder).kind == LinkKind::FSL);
        }
        for (PeerId v : out.visited_nodes) {
            if (v == source) continue;
            REQUIRE(net.peer(v).out_links.count(source) == 1);
            CHECK(net.peer(v).out_links.at(source).kind != LinkKind::AL);
        }
    }
}

TEST_CASE("every strategy's retrieved set is hosted, matching, and oracle-covered") {
    Corpus c = test::orthogonal_corpus(5);
    Network net(13);
    for (PeerId id = 0; id < 10; ++id) {
        Peer p;
        p.id = id;
        p.resources = {static_cast<DocId>(id % 5)};
        p.pk = peer_knowledge(p.resources, c, net.vector_cap());
        net.join(std::move(p), 2);
    }
    RoutingParams p = params_with(0.5, 0.2);
    Rng rng(77);
    for (std::uint64_t qid = 0; qid < 15; ++qid) {
        const TermVector& q = c.documents[qid % 5].vector;
        const PeerId source = static_cast<PeerId>(qid % 10);
        auto oracle = oracle_matching(net, q, p, c);
        QueryOutcome outs[3] = {
            exec_query_flood(net, query(q, source, 4, qid), p, c),
            exec_query_rw(net, query(q, source, 4, qid), p, c, rng),
            exec_query_prosa(net, query(q, source, 4, qid), p, c),
        };
        for (const auto& out : outs) {
            for (const auto& [holder, doc] : out.retrieved) {
                const auto& res = net.peer(holder).resources;
                CHECK(std::find(res.begin(), res.end(), doc) != res.end());
                CHECK(cosine_similarity(c.documents[doc].vector, q) >= p.doc_threshold);
                CHECK(oracle.count({holder, doc}) == 1);
            }
            CHECK(out.answered == !out.retrieved.empty());
            std::set<PeerId> uniq(out.visited_nodes.begin(), out.visited_nodes.end());
            CHECK(uniq.size() == out.visited_nodes.size());
        }
    }
}
