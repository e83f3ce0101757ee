"""Hardy's Z function at Gram points: theta, Gram points, smooth weights,
Z evaluators, exponential-sum transforms and the Gram-sum experiments."""

__version__ = "0.1.0"
