"""Smoke test for the ffred_py extension module."""

import ffred_py as ff


def main():
    f3 = ff.Field(3)
    t = f3.t()
    one = f3.constant(1)

    assert (t + 1) * (t - 1) == t * t - 1
    assert (t / (t + one)).den_degree == 1
    assert t.frobenius_power(2) == t ** 9
    assert 2 + t == t + 2
    assert hash(t * t) == hash(t ** 2)
    try:
        _ = t / f3.constant(0)
        raise AssertionError("division by zero accepted")
    except ZeroDivisionError:
        pass
    try:
        _ = t + ff.Field(5).t()
        raise AssertionError("mixed fields accepted")
    except ValueError:
        pass

    a = ff.as_image(t ** 2 + t)
    u = ff.solve_as(a)
    assert u is not None and ff.as_image(u) == a
    assert ff.solve_as(t) is None

    w = ff.version1_witness(f3, 2)
    assert w["w"] == t ** 9
    assert ff.classify_version1(w["w"]) == 2

    x = ff.encode(f3, 3)
    assert x == t ** 27 and ff.decode(x) == 3
    assert ff.divides_witness(f3, 2, 4) is not None
    assert ff.divides_witness(f3, 2, 5) is None
    assert ff.check_add_triple(ff.encode(f3, 2), ff.encode(f3, 3), ff.encode(f3, 5))

    ring = ff.translate("(divides 2 4)", f3)
    report = ff.evaluate(ring, f3)
    assert report["verdict"] == "true", report
    assert ff.translate("(= (+ 1 1) 2)", f3, wrap_q=True).startswith("(forall")
    assert ff.eval_arith("(exists x (= (+ x x) 3))", bound=5) is False
    assert ff.eval_arith("(divides a 6)", bindings={"a": 3})

    try:
        ff.evaluate("(exists x (= (* x x) (param t)))", f3, mode="ring-bounded", degree_bound=27)
        raise AssertionError("guard did not trip")
    except ff.ResourceLimitError:
        pass

    checks = ff.run_checks("version1", f3)
    assert checks["status"] == "pass", checks

    f5 = ff.Field(5)
    curve = ff.TwistCurve(f5, [1, 1, 0, 1])
    p1 = curve.frobenius_point(1)
    assert curve.on_curve(p1)
    s = curve.add(p1, curve.neg(p1))
    assert s.is_infinity
    assert curve.on_curve(curve.mul(2, p1))

    assert ff.genus_params(2, 3) == (1, 5)
    info = ff.quadratic_ramification(f5.t() ** 3 + f5.t() + 1)
    assert sum(info["ramified_degrees"]) <= info["n_alpha"]

    print("smoke test passed")


if __name__ == "__main__":
    main()
