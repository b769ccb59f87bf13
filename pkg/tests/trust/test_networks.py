import pytest

import trustlogic.trust.networks as nw


def test_close_forwarding_adds_sublists():
    network = nw.close_forwarding([("a", "i", "b")])
    assert network.render() == ["a", "b", "i", "a i", "i b", "a i b"]
    assert network.is_forwarding_network()


def test_close_forwarding_splices():
    network = nw.close_forwarding([("a", "b", "c"), ("b", "x", "c")])
    assert ("a", "b", "x", "c") in network
    assert network.is_forwarding_network()


def test_unclosed_network_detected():
    assert not nw.ForwardingNetwork(frozenset({("a", "b")})).is_forwarding_network()


@pytest.mark.parametrize("seed", [[()], [("a", "b", "a")], [("a-b",)]])
def test_bad_paths_rejected(seed):
    with pytest.raises(ValueError):
        nw.close_forwarding(seed)


def test_shortest_paths_are_receiver_first():
    network = nw.shortest_paths_network([("CA", "a"), ("b", "CA")])
    assert network.paths_between("a", "b") == [("a", "CA", "b")]
    assert network.paths_between("b", "a") == []
    assert network.agents == ["CA", "a", "b"]
    assert network.is_forwarding_network()


def test_shortest_paths_keep_every_shortest_route():
    edges = [("b", "i"), ("b", "j"), ("i", "a"), ("j", "a"), ("b", "a")]
    network = nw.shortest_paths_network(edges)
    assert network.paths_between("a", "b") == [("a", "b")]
    edges = edges[:-1]
    network = nw.shortest_paths_network(edges, vertices=["z"])
    assert network.paths_between("a", "b") == [("a", "i", "b"), ("a", "j", "b")]
    assert ("z",) in network


def test_acyclic_paths():
    network = nw.acyclic_paths_network([("c", "b"), ("b", "a"), ("c", "a")])
    assert network.paths_between("a", "c") == [("a", "b", "c"), ("a", "c")]
    with pytest.raises(nw.NetworkError, match="cycle"):
        nw.acyclic_paths_network([("a", "b"), ("b", "a")])


def test_reachable_through_needs_strict_interior():
    network = nw.shortest_paths_network([("CA", "a"), ("b", "CA")])
    assert nw.reachable_through(network, "a", "CA", "b")
    assert not nw.reachable_through(network, "a", "b", "b")
    assert not nw.reachable_through(network, "a", "a", "b")


def test_trust_edge():
    edge = nw.TrustEdge(1, "a", "CA", "P")
    assert edge.render() == "1 a CA P"
    with pytest.raises(ValueError):
        nw.TrustEdge(-1, "a", "b")


def test_graph_spec():
    spec = nw.TrustGraphSpec(
        ("a", "b", "c"), (("b", "a"),), nw.SHORTEST, seeds=(("a", "c"),)
    )
    network = spec.network()
    assert ("a", "b") in network
    assert ("a", "c") in network
    with pytest.raises(ValueError):
        nw.TrustGraphSpec(mode="widest")
