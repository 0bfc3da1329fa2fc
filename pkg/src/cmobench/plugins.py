"""External problem plugins.

A plugin is any executable speaking a line-oriented protocol on stdio:
request = the decision vector as D space-separated floats on one line,
response = M + ng + nh space-separated floats (objectives, then inequality
values, then equality values, all in canonical form).  Registry metadata
fixes the expected dimensions.
"""

from __future__ import annotations

import subprocess
from dataclasses import dataclass, field

import numpy as np

from .benchmarks import RegistryEntry, registry_lookup
from .core import ProblemSpec


class PluginProtocolError(RuntimeError):
    pass


@dataclass
class PluginProcess:
    """Keeps one plugin subprocess alive across evaluations."""

    command: list[str]
    _proc: subprocess.Popen = field(init=False, default=None, repr=False)

    def _ensure(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        return self._proc

    def query(self, x: np.ndarray, n_out: int) -> np.ndarray:
        proc = self._ensure()
        line = " ".join(repr(float(v)) for v in x)
        try:
            proc.stdin.write(line + "\n")
            proc.stdin.flush()
            reply = proc.stdout.readline()
        except (BrokenPipeError, OSError) as exc:
            raise PluginProtocolError(f"plugin died: {exc}") from exc
        if not reply:
            raise PluginProtocolError("plugin closed its output stream")
        values = np.array([float(tok) for tok in reply.split()])
        if len(values) != n_out:
            raise PluginProtocolError(
                f"expected {n_out} values from plugin, got {len(values)}"
            )
        return values

    def close(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            self._proc.stdin.close()
            self._proc.wait(timeout=5)
        self._proc = None


def external_problem(
    name: str,
    command: list[str],
    lower: np.ndarray | None = None,
    upper: np.ndarray | None = None,
) -> ProblemSpec:
    """Wrap a registered external problem behind the standard evaluator.

    Dimensions are validated against the registry row; bounds default to the
    unit box when the plugin declaration does not supply them.
    """
    entry: RegistryEntry = registry_lookup(name)
    if entry.kind != "external":
        raise ValueError(f"{name} is a builtin problem, not a plugin")
    d, m, ng, nh = entry.d, entry.m, entry.ng, entry.nh
    lower = np.zeros(d) if lower is None else np.asarray(lower, dtype=float)
    upper = np.ones(d) if upper is None else np.asarray(upper, dtype=float)
    if lower.shape != (d,) or upper.shape != (d,):
        raise ValueError(f"bounds must have length {d} per the registry")

    proc = PluginProcess(command=list(command))
    n_out = m + ng + nh

    def evaluator(X: np.ndarray):
        X = np.atleast_2d(X)
        out = np.empty((X.shape[0], n_out))
        for i, row in enumerate(X):
            out[i] = proc.query(row, n_out)
        return out[:, :m], out[:, m : m + ng], out[:, m + ng :]

    return ProblemSpec(
        name=entry.name,
        m=m,
        n=d,
        p=ng,
        q=nh,
        lower=lower,
        upper=upper,
        evaluator=evaluator,
    )
