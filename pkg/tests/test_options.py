import copy

import pytest

import trustlogic._options as opt


def test_options_context():
    default_options = copy.deepcopy(opt.options)
    updated_options = opt.LogicOptions(
        include_box=True,
        search=opt.SearchOptions(node_budget=50, loop_check=True, cache_results=True),
        trust=opt.TrustOptions(forward_index="trustee"),
    )
    new_options = opt.LogicOptions(
        include_box=True,
        search=opt.SearchOptions(node_budget=50),
        trust=opt.TrustOptions(forward_index="trustee"),
    )
    with opt.options_context(new_options):
        context_options = copy.deepcopy(opt.options)
        assert opt.resolve_config_option("search.node_budget", None) == 50

    assert opt.options == default_options
    assert context_options == updated_options


@pytest.mark.parametrize(
    "path,value,expected",
    [
        ("search.node_budget", None, 200_000),
        ("search.node_budget", 7, 7),
        ("trust.forward_index", None, "both"),
        ("models.max_worlds", None, 3),
        ("include_box", False, False),
    ],
)
def test_resolve_config_option(path, value, expected):
    with opt.options_context(opt.LogicOptions()):
        assert opt.resolve_config_option(path, value) == expected


def test_save_and_load(tmp_path):
    path = tmp_path / "trustlogic-config.yaml"
    opt.LogicOptions(terms=opt.TermOptions(step_limit=12)).save(path)
    loaded = opt.LogicOptions.load(path)
    assert loaded.terms.step_limit == 12
    assert loaded._to_dict() == opt.LogicOptions(terms=opt.TermOptions(step_limit=12))._to_dict()
    assert f"Source: {path}" in str(loaded)


update_recursive_cases = [
    ({"a": 1, "b": 2}, {"b": 3}, {"a": 1, "b": 3}),
    (
        {"a": 1, "b": 2, "c": {"d": 4, "e": 5}},
        {"b": 3, "c": {"e": 6}},
        {"a": 1, "b": 3, "c": {"d": 4, "e": 6}},
    ),
]


@pytest.mark.parametrize("input1,input2,expected", update_recursive_cases)
def test_update_recursive(input1, input2, expected):
    assert opt.update_recursive(input1, input2) == expected
