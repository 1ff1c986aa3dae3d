"""Perturbation-based token attributions for a linear model's decisions.

Mirrors the usual local-surrogate recipe: sample binary keep/mask
vectors over the doc's tokens, score the model on each masked text,
fit a weighted ridge surrogate (weight = exp(-d^2 / width^2), d =
fraction of tokens masked), read per-token attributions off the
coefficients. Deterministic for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .emoji import alias_for, base_form, cluster_spans
from .linear import LinearModel, score_text
from .textnorm import NormalizationConfig, normalize, tokenize


def replace_emoji_with_aliases(text: str) -> str:
    """Swap each emoji cluster for a readable ':name:' token."""
    out: list[str] = []
    pos = 0
    for a, b in cluster_spans(text):
        out.append(text[pos:a])
        out.append(f" {alias_for(base_form(text[a:b]))} ")
        pos = b
    out.append(text[pos:])
    return "".join(out)


def explain_preprocess(text: str, cfg: NormalizationConfig = NormalizationConfig()) -> str:
    """Mentions/URLs/newlines canonicalized, emoji aliased, repeats squashed."""
    return normalize(replace_emoji_with_aliases(text), cfg)


@dataclass(frozen=True)
class Explanation:
    tokens: tuple[str, ...]
    attributions: tuple[float, ...]
    intercept: float
    r2: float
    top: tuple[tuple[str, float], ...]
    score_full: float
    score_empty: float


def explain(
    text: str,
    model: LinearModel,
    n_samples: int = 1000,
    kernel_width: float = 0.25,
    top_k: int = 10,
    seed: int = 0,
    ridge_lambda: float = 1.0,
    preprocess: bool = True,
) -> Explanation:
    """Attribution per token of one document under one model."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if kernel_width <= 0:
        raise ValueError("kernel_width must be positive")
    prepared = explain_preprocess(text) if preprocess else text
    tokens = tuple(tokenize(prepared))
    m = len(tokens)
    if m == 0:
        raise ValueError("document has no tokens to explain")

    rng = np.random.default_rng(seed)
    masks = rng.integers(0, 2, size=(n_samples, m)).astype(np.float64)  # 1 = kept
    scores = np.empty(n_samples)
    for s in range(n_samples):
        kept = [tokens[t] for t in range(m) if masks[s, t] > 0]
        scores[s] = score_text(model, " ".join(kept), pre_normalized=preprocess)
    d = 1.0 - masks.mean(axis=1)
    weights = np.exp(-(d**2) / (kernel_width**2))

    # weighted ridge with unpenalized intercept
    A = np.hstack([np.ones((n_samples, 1)), masks])
    WA = A * weights[:, None]
    lhs = A.T @ WA
    penalty = np.full(m + 1, ridge_lambda)
    penalty[0] = 0.0
    lhs[np.diag_indices_from(lhs)] += penalty
    rhs = A.T @ (weights * scores)
    beta = np.linalg.solve(lhs, rhs)
    intercept, attrib = float(beta[0]), beta[1:]

    fitted = A @ beta
    w_total = weights.sum()
    y_bar = float((weights * scores).sum() / w_total)
    ss_res = float((weights * (scores - fitted) ** 2).sum())
    ss_tot = float((weights * (scores - y_bar) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res == 0 else 0.0)

    ranked = sorted(zip(tokens, attrib), key=lambda p: (-abs(p[1]), p[0]))
    top = tuple((t, float(v)) for t, v in ranked[: max(0, top_k)])
    return Explanation(
        tokens=tokens,
        attributions=tuple(float(v) for v in attrib),
        intercept=intercept,
        r2=r2,
        top=top,
        score_full=score_text(model, " ".join(tokens), pre_normalized=preprocess),
        score_empty=score_text(model, "", pre_normalized=preprocess),
    )


def dump_explanation(ex: Explanation) -> str:
    lines = [
        f"score_full\t{ex.score_full:.10f}",
        f"score_empty\t{ex.score_empty:.10f}",
        f"intercept\t{ex.intercept:.10f}",
        f"r2\t{ex.r2:.10f}",
        "token\tattribution",
    ]
    lines.extend(f"{t}\t{v:.10f}" for t, v in ex.top)
    return "\n".join(lines) + "\n"
