import argparse
import json

import pytest

import trustlogic._cli as cli
import trustlogic._options as opt
from trustlogic.publish.queries import corpus_paths

arg_test_values = [
    (("--version", "-v"), {"verbose": True}, (["--version", "-v"], {"verbose": True})),
    (("positional_arg",), {}, (["positional_arg"], {})),
]


def corpus_file(name: str) -> str:
    return str(next(p for p in corpus_paths() if p.name == name))


@pytest.mark.parametrize("name_or_flags,kwargs,expected", arg_test_values)
def test_argument(expected, name_or_flags, kwargs):
    output = cli.argument(*name_or_flags, **kwargs)
    assert output == expected


def test_subcommand():
    parser = argparse.ArgumentParser()
    subparsers = parser.add_subparsers(dest="subcommand")

    @cli.subcommand(cli.argument("--message"), parent=subparsers)
    def my_subcommand(args):
        return args.message

    @cli.subcommand(parent=subparsers, name="other")
    def renamed(args):
        return "renamed"

    args = parser.parse_args(["my-subcommand", "--message", "test"])
    assert args.func(args) == "test"
    args = parser.parse_args(["other"])
    assert args.func(args) == "renamed"


def test_print_default_options(capsys):
    assert cli.print_default_options() == cli.EXIT_OK
    captured = capsys.readouterr()
    expected = opt.LogicOptions()._to_yaml_str().strip()
    assert captured.out.strip() == expected


def test_no_subcommand_prints_help(capsys):
    assert cli.main([]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "subcommands:" in out
    assert "trust-derive" in out


exit_code_cases = [
    (["prove", corpus_file("validity.tl"), "t -> [I a <- b]t -> t"], cli.EXIT_OK),
    (["prove", corpus_file("validity.tl"), "t -> [B a]t"], cli.EXIT_NEGATIVE),
    (["prove", corpus_file("validity.tl"), "[B a](t -> r) -> [B a]t -> [B a]r", "--budget", "2"], cli.EXIT_UNDECIDED),
    (["term", corpus_file("fitch_example.tl"), "[I a <- b]t -> [B a]t", "--from", "h"], cli.EXIT_OK),
    (["countermodel", corpus_file("validity.tl"), "[B a]t -> t"], cli.EXIT_NEGATIVE),
    (["countermodel", corpus_file("validity.tl"), "t -> [B a]t", "--worlds", "1"], cli.EXIT_UNDECIDED),
    (["trust-derive", corpus_file("dedicated_domain.tl")], cli.EXIT_OK),
    (["trust-derive", corpus_file("dedicated_domain.tl"), "--edge", "1", "a", "b", "P"], cli.EXIT_NEGATIVE),
    (["trust-verify", corpus_file("dedicated_domain.tl"), "0", "a", "b", "P"], cli.EXIT_OK),
    (["trust-verify", corpus_file("dedicated_domain.tl"), "1", "a", "CA", "P"], cli.EXIT_NEGATIVE),
    (["risk", "1of2", "0.1", "0.2"], cli.EXIT_OK),
    (["corpus", "run", corpus_file("fitch_example.tl"), corpus_file("validity.tl")], cli.EXIT_OK),
]


@pytest.mark.parametrize("argv,code", exit_code_cases)
def test_exit_codes(argv, code, capsys):
    assert cli.main(argv) == code


usage_error_cases = [
    ["prove", corpus_file("validity.tl"), "t ->"],
    ["prove", corpus_file("validity.tl"), "[B z]t"],
    ["prove", corpus_file("validity.tl"), "t", "--from", "nope"],
    ["prove", "no-such-file.tl", "t"],
    ["trust-verify", corpus_file("dedicated_domain.tl"), "x", "a", "b", "P"],
    ["trust-verify", corpus_file("dedicated_domain.tl"), "0", "a", "z", "P"],
    ["trust-derive", corpus_file("validity.tl")],
    ["risk", "3of2", "0.1", "0.2"],
    ["risk", "2of3", "0.1"],
    ["risk", "1of1", "1.5"],
    ["--log-level", "chatty", "risk", "1of1", "0.3"],
]


@pytest.mark.parametrize("argv", usage_error_cases)
def test_usage_errors(argv, capsys):
    assert cli.main(argv) == cli.EXIT_USAGE
    assert "trustlogic: error:" in capsys.readouterr().err


def test_unknown_agent_message(capsys):
    cli.main(["trust-verify", corpus_file("dedicated_domain.tl"), "0", "a", "z", "P"])
    assert "unknown agent: 'z'" in capsys.readouterr().err


def test_bad_arguments_exit_with_usage_code(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["no-such-subcommand"])
    assert e.value.code == cli.EXIT_USAGE


def test_prove_text_output(capsys):
    cli.main(["prove", corpus_file("fitch_example.tl"), "[I a <- b]t -> [B a]t"])
    out = capsys.readouterr().out
    assert "verdict: **proved**" in out
    assert "assumptions used: h" in out
    assert "[ImpR]" in out


def test_risk_json_output(capsys):
    assert cli.main(["risk", "2of3", "0.05", "0.05", "0.05", "--json"]) == cli.EXIT_OK
    report = json.loads(capsys.readouterr().out)["reports"][0]
    assert report["kind"] == "risk"
    assert report["verdict"] == "derived"
    assert report["value"] == pytest.approx(0.00725, abs=1e-12)


def test_corpus_html(tmp_path, capsys):
    path = tmp_path / "corpus.html"
    argv = ["corpus", "run", corpus_file("threshold.tl"), "--html", str(path)]
    assert cli.main(argv) == cli.EXIT_OK
    assert "expectations met" in capsys.readouterr().out
    assert "<html" in path.read_text()


def test_failing_corpus_file(tmp_path, capsys):
    path = tmp_path / "wrong.tl"
    path.write_text("agent a\nexpect prove proved : t -> [B a]t\n")
    assert cli.main(["corpus", "run", str(path)]) == cli.EXIT_NEGATIVE
    assert "FAILED" in capsys.readouterr().out
