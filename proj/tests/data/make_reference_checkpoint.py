"""Writes reference_n16.zcwf and its sidecar from an independent numpy implementation."""
import json
import struct
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent
N = 16
L = 2e-6
D = 1e-6
EPS = 1e-15
ELL = 1e-6
MP = 1.67262192369e-27
E = 1.602176634e-19


def fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def main() -> None:
    i = np.arange(N)
    x = (i + 1) * L / (N + 1)
    x1, x2 = np.meshgrid(x, x, indexing="ij")
    psi = np.exp(-((x1 - 0.3 * L) ** 2 + (x2 - 0.7 * L) ** 2) / (2 * (0.15 * L) ** 2))
    psi = psi * np.exp(1j * 2 * np.pi * x1 / L)
    psi[x1 > x2 + 0.5 * L] = 0
    psi /= np.sqrt(np.sum(np.abs(psi) ** 2))

    payload = np.empty(2 * N * N, dtype="<f8")
    payload[0::2] = psi.real.ravel()
    payload[1::2] = psi.imag.ravel()
    body = payload.tobytes()

    header = b"ZCWF" + struct.pack("<III", 1, N, 0)
    header += struct.pack("<9d", L, D, EPS, ELL, MP, E, E, MP, MP)
    header += struct.pack("<Q", fnv1a64(body))
    assert len(header) == 96
    (HERE / "reference_n16.zcwf").write_bytes(header + body)

    side = {
        "points_per_axis": N,
        "plate_separation": L,
        "d": D,
        "epsilon": EPS,
        "norm": float(np.sqrt(np.sum(np.abs(psi) ** 2))),
        "checksum": fnv1a64(body),
        "amplitude_3_11": [float(psi[3, 11].real), float(psi[3, 11].imag)],
        "amplitude_0_0": [float(psi[0, 0].real), float(psi[0, 0].imag)],
        "zero_count": int(np.sum(psi == 0)),
    }
    (HERE / "reference_n16.json").write_text(json.dumps(side, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
