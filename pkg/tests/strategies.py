from hypothesis import strategies as st


def complex_amplitudes(max_abs: float = 3.0):
    part = st.floats(-max_abs, max_abs, allow_nan=False, allow_infinity=False)
    return st.builds(complex, part, part).filter(lambda z: abs(z) <= max_abs)


phases = st.floats(-6.3, 6.3, allow_nan=False, allow_infinity=False)
