"""Oracle values frozen from an independent arbitrary-precision run (mpmath,
40 digits: loggamma, digamma, zeta, siegelz, siegeltheta, findroot on
siegeltheta, quad).  They are constants here; mpmath is not needed at test time.
"""

LOGGAMMA_QUARTER_10I = complex(-15.364592760295240141, 12.634193666938485786)
LOGGAMMA_QUARTER_5E5I = complex(-785400.52504975945599, 6061181.296003103532)
DIGAMMA_QUARTER_50I = complex(3.9120188386885588806, 1.5757964518105263876)
ZETA_HALF = -1.4603545088095868129
ZETA_AT_100 = complex(2.6926198856813240905, -0.020386029602598161771)
ZETA_AT_12345_678 = complex(0.87775548256284904899, -0.037627073720467619704)
FIRST_ZERO = 14.13472514173469379
EULER_GAMMA = 0.57721566490153286061

Z_VALUES = {
    20.0: 1.1478424121851972776,
    100.0: 2.692697056664463475,
    1000.0: 0.99779463752158661399,
    5000.5: 0.58542531924643895021,
    19999.0: -2.2721521932248027512,
}

THETA_VALUES = {
    6.0: -3.527573970941369905479975,
    50.0: 26.46136607016140964745495,
    1000.0: 2034.546428038031608703345,
    123456.789: 548503.8875428175521060283,
    1000000.0: 5488816.353078403444882823,
}

GRAM_VALUES = {
    -1: 9.6669080561301921413, 0: 17.845599540410860817, 1: 23.170282701246309279,
    2: 27.670182217816337961, 3: 31.71797995476405318, 4: 35.467184297100216116,
    5: 38.999209964026074817, 6: 42.363550392057337969, 7: 45.593028981503522274,
    8: 48.71077662179333294, 9: 51.733842813346104371, 10: 54.675237446853256266,
    11: 57.545165179547254437,
}
GRAM_1E6 = 600270.4598343436895

# The twelve Gram points g(-1), ..., g(10) as printed in the classical table.
PRINTED_GRAM = {
    -1: "9.6", 0: "17.8", 1: "23.1", 2: "27.6", 3: "31.7", 4: "35.4",
    5: "38.9", 6: "42.3", 7: "45.5", 8: "48.7", 9: "51.7", 10: "54.7",
}

# int_{-1/2}^{1/2} exp(1/(t^2 - 1/4)) dt
BUMP_INTEGRAL = 0.0070298584066096562392


def matches_printed(value: float, printed: str) -> bool:
    """True if value truncates or rounds to the printed decimal string."""
    digits = len(printed.split(".")[1])
    scale = 10**digits
    trunc = int(value * scale) / scale
    return f"{trunc:.{digits}f}" == printed or f"{value:.{digits}f}" == printed


def richardson_derivative(f, t: float, rel_step: float = 1e-6) -> float:
    """Central difference with one Richardson step, h = t * rel_step."""
    h = t * rel_step

    def central(step):
        return (f(t + step) - f(t - step)) / (2 * step)

    return (4 * central(h / 2) - central(h)) / 3


def richardson_budget(radius: float, t: float, rel_step: float = 1e-6) -> float:
    """Cancellation budget of richardson_derivative for values known to +-radius."""
    return 3 * radius / (t * rel_step) + 1e-12
