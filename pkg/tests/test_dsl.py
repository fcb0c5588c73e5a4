import pytest
from hypothesis import given, strategies as st

from weilkit import GF, EtaleAlgebra, PolyRing, parse_session
from weilkit.dsl import DSLNameError, DSLSyntaxError, DSLTypeMismatch, VERIFY_TARGETS, parse_poly

HEADER = "field k = GF(2)\nalgebra L = k[t]/(t^2+t+1)\n"


def test_three_declarations():
    s = parse_session(HEADER + "scheme X over L = [x,y]/(x*y-1)\n")
    assert [d.kind for d in s.declarations.values()] == ["field", "algebra", "scheme"]
    assert s.get("X").variables == ("x", "y")


def test_undefined_name_located():
    with pytest.raises(DSLNameError) as info:
        parse_session("scheme X over M = [x]\n")
    assert (info.value.line, info.value.column) == (1, 15)


def test_inseparable_algebra_is_a_type_mismatch():
    with pytest.raises(DSLTypeMismatch) as info:
        parse_session("field k = GF(2)\nalgebra L = k[t]/(t^2)\n")
    assert info.value.line == 2 and "NotSeparable" in str(info.value)


def test_non_prime_field_rejected():
    with pytest.raises(DSLTypeMismatch):
        parse_session("field k = GF(4)\n")


def test_wrong_kind_reference():
    text = HEADER + "scheme X over L = [x]\nverify thom X\n"
    with pytest.raises(DSLTypeMismatch) as info:
        parse_session(text)
    assert "expected bundle" in str(info.value) and info.value.line == 4


def test_unknown_target_lists_expectations():
    with pytest.raises(DSLSyntaxError) as info:
        parse_session(HEADER + "scheme X over L = [x]\nverify everything X\n")
    assert set(info.value.expected) == set(VERIFY_TARGETS)


def test_truncated_polynomial():
    with pytest.raises(DSLSyntaxError) as info:
        parse_session("field k = GF(2)\nscheme X over k = [x]/(x + \n")
    assert info.value.line == 2 and "'('" in info.value.expected


def test_commands_and_field_specs():
    s = parse_session(HEADER + "scheme X over L = [x,y]/(x*y-1)\n"
                      "restrict X\npoints X over GF(4)\nverify adjunction X over GF(2), GF(2^3)\n")
    verbs = [(c.verb, c.target) for c in s.commands]
    assert verbs == [("restrict", ""), ("points", ""), ("verify", "adjunction")]
    assert [str(f) for f in s.commands[2].fields] == ["GF(2)", "GF(2^3)"]
    assert s.commands[2].text == "verify adjunction X over GF(2), GF(2^3)"


def test_scheme_forms():
    s = parse_session(HEADER + "scheme A over L = [x, y]\nscheme Z = A/(y)\nscheme U = A[1/(x)]\n"
                      "scheme W = U[z]/(z^2 - x)\n")
    assert s.get("Z").dimension() == 1
    assert s.get("U").nvars == 3
    assert s.get("W").nvars == 4


def test_morphism_and_bundle_declarations():
    s = parse_session(HEADER + "scheme G over L = [x,y]/(x*y-1)\nscheme A over L = [u]\n"
                      "morphism f : G -> A = (x)\nbundle O on G = [[1]] rank 1\n")
    assert s.get("f").is_well_defined() and s.get("O").rank == 1
    with pytest.raises(DSLTypeMismatch):
        parse_session(HEADER + "scheme G over L = [x,y]/(x*y-1)\nscheme A over L = [u]\n"
                      "morphism g : A -> G = (u)\n")


coeff = st.tuples(st.integers(0, 1), st.integers(0, 1))
terms = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), coeff, max_size=5)


@given(terms)
def test_printed_polynomials_parse_back(t):
    L = EtaleAlgebra(GF(2), [1, 1, 1])
    R = PolyRing(L, ["x", "y"])
    p = R.from_terms((e, L.element(c)) for e, c in t.items())
    assert parse_poly(str(p), R) == p
    if p:
        s = parse_session(HEADER + f"scheme X over L = [x, y]/({p})\n")
        assert list(s.get("X").generators) == [p]
