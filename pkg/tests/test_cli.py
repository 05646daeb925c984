import io
import json

import pytest

from outerforms.cli import EXIT_ERROR, EXIT_OK, EXIT_UNKNOWN, run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_symbol():
    assert call("symbol", "--tower", "Q", "-a", "-1", "-b", "-1", "--place", "2") == (EXIT_OK, "-1\n")
    code, out = call("symbol", "-a", "2", "-b", "3", "--place", "inf", "--json")
    assert code == EXIT_OK and json.loads(out)["symbol"] == 1


def test_symbol_errors():
    assert call("symbol", "-a", "x", "-b", "3", "--place", "2")[0] == EXIT_ERROR
    assert call("symbol", "-a", "2", "-b", "3", "--place", "4")[0] == EXIT_ERROR
    assert call("symbol", "--tower", "Q[x]", "-a", "2", "-b", "3", "--place", "2")[0] == EXIT_ERROR


def test_usage_error_is_not_unknown(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["symbol", "-a", "1"])
    assert exc.value.code == EXIT_ERROR


def test_parse_error_reports_position():
    code, out = call("quat", "-a", "1", "-b", "2+", "--json")
    d = json.loads(out)
    assert code == EXIT_ERROR and d["position"] == 2


def test_isotropy_verdicts():
    assert call("isotropy", "--form", "1,1,1") == (EXIT_OK, "anisotropic\n")
    code, out = call("isotropy", "--form", "1,1,-2", "--json")
    d = json.loads(out)
    assert code == EXIT_OK and d["verdict"] == "isotropic" and d["certified"]
    assert call("isotropy", "--form", "1,1", "--value", "3")[1] == "no\n"


def test_unknown_exit_code():
    code, out = call("isotropy", "--tower", "Q[x,y]", "--form", "1,x,y,-x-y-1", "--budget", "0")
    assert code == EXIT_UNKNOWN and out.strip() == "unknown"


def test_quat():
    code, out = call("quat", "--tower", "Q[a1,a2]", "-a", "a1", "-b", "a2", "--element", "1+i+j",
                     "--division", "--pure-square", "a3", "--splits", "a1*a2*a3", "--json")
    d = json.loads(out)
    assert code == EXIT_OK
    assert d["division"]["verdict"] == "division"
    assert d["pure_square"]["verdict"] == "yes" and d["splits"]["verdict"] == "yes"
    assert d["elements"][0]["nrd"] == "-a1 - a2 + 1"


def test_define_macros():
    code, out = call("quat", "--tower", "Q[u]", "--define", "c=u^2+1", "-a", "c", "-b", "-1", "--json")
    assert code == EXIT_OK and json.loads(out)["Q"][0] == "u^2 + 1"
    code, _ = call("quat", "--define", "c=c+1", "-a", "c", "-b", "-1")
    assert code == EXIT_ERROR


def test_similitude():
    code, out = call("similitude", "-a", "-1", "-b", "-1", "--entries", "i,j,k", "--mu", "2", "--pattern", "+++",
                     "--json")
    d = json.loads(out)
    assert code == EXIT_OK and d["similitude"]["type"] == "proper"
    assert call("similitude", "-a", "-1", "-b", "-1", "--entries", "i", "--mu", "1", "--pattern=-")[0] == EXIT_ERROR


def test_outness_even_example():
    code, out = call("outness", "--tower", "Q(i)[a1,a2][r,s,t]", "--squares", "a1,a2,a3", "--n", "4", "--even")
    assert code == EXIT_OK
    assert out.splitlines()[:3] == ["Out1: holds", "Out2: fails", "Out3: fails"]


def test_outness_asserted_and_unknown():
    args = ["outness", "--tower", "Q[a1,a2]", "--squares", "a1,a2,a3", "--n", "3", "--odd"]
    code, out = call(*args)
    assert code == EXIT_UNKNOWN and "Out3: unknown" in out
    code, out = call(*args, "--assert=---=ex-noimproperlemma-cond2", "--json")
    d = json.loads(out)
    assert code == EXIT_OK
    assert d["out3"]["status"] == "paper-asserted" and d["out2"]["verdict"] == "fails"
    assert call(*args[:-1], "--even")[0] == EXIT_ERROR


def test_descend_rank_three():
    args = ["descend", "-a", "-1", "-b", "-1", "-d", "5", "--entries", "1 + sqrtd*i, 2 - sqrtd*(j+k), sqrtd*k - 3",
            "--json"]
    code, out = call(*args)
    d = json.loads(out)
    assert code == EXIT_OK and all(d["checks"].values()) and len(d["hPrime"]) == 3


def test_json_is_deterministic():
    args = ["outness", "--tower", "Q", "-a", "-1", "-b", "-1", "--squares", "-1", "--n", "3", "--json"]
    first = call(*args)
    assert first == call(*args)
    d = json.loads(first[1])
    assert json.dumps(d, sort_keys=True, separators=(",", ":")) + "\n" == first[1]


def test_verify_paper_subset():
    code, out = call("verify-paper", "--only", "eq-a3-identity-1", "--only", "exunit-out3")
    assert code == EXIT_OK
    assert "paper-asserted (1): exunit-out3" in out
