# src\deadcore_app\persistence\file_manager.py

import json
import struct
import numpy as np
import pandas as pd
from pathlib import Path
from typing import Dict, Optional, Union

from ..core.numerics import RadialProfile
from ..core.utils import ConfigFieldsManager, Field, TableKind
from ..core.utils.errors import ArgumentError, ShapeError

PathLike = Union[str, Path]


class FileManager:
    """
    Gerencia a escrita e leitura dos artefatos das execuções: campos (CSV e
    binário), perfis radiais, tabelas para gráficos e relatórios.
    """
    # Cabeçalho binário: magic, versão u16, N u64, h f64, origem (f64, f64)
    BINARY_MAGIC = b"DCLF"
    BINARY_VERSION = 1
    _HEADER = struct.Struct("<4sHQddd")

    FIELD_COLUMNS = ["i", "j", "x", "y", "value", "in_domain"]

    # --- Campos ---

    @staticmethod
    def save_field_csv(f: Field, path: PathLike) -> Path:
        """Uma linha por nó: i, j, x, y, value, in_domain (0/1)."""
        X, Y = f.coordinates()
        I, J = np.meshgrid(np.arange(f.N), np.arange(f.N), indexing="ij")
        df = pd.DataFrame({
            "i": I.ravel(),
            "j": J.ravel(),
            "x": X.ravel(),
            "y": Y.ravel(),
            "value": f.values.ravel(),
            "in_domain": f.domain_mask.ravel().astype(int),
        })
        path = Path(path)
        df.to_csv(path, index=False, lineterminator="\n")
        print(f"  Campo salvo em: {path}")
        return path

    @staticmethod
    def load_field_csv(path: PathLike) -> Field:
        df = pd.read_csv(path, float_precision="round_trip")
        missing = set(FileManager.FIELD_COLUMNS) - set(df.columns)
        if missing:
            raise ShapeError(f"Colunas ausentes no campo CSV: {sorted(missing)}")

        N = int(df["i"].max()) + 1
        if len(df) != N * N:
            raise ShapeError(f"CSV com {len(df)} linhas não forma uma grade {N}×{N}.")
        df = df.sort_values(["i", "j"], kind="stable")
        values = df["value"].to_numpy(dtype=float).reshape(N, N)
        mask = df["in_domain"].to_numpy().astype(bool).reshape(N, N)
        x = df["x"].to_numpy(dtype=float).reshape(N, N)
        y = df["y"].to_numpy(dtype=float).reshape(N, N)
        h = (x[-1, 0] - x[0, 0]) / (N - 1)
        return Field(values, h, mask, (x[0, 0], y[0, 0]))

    @staticmethod
    def save_field_binary(f: Field, path: PathLike) -> Path:
        """Dump binário little-endian: cabeçalho, N² f64 (linha a linha) e N² u8 da máscara."""
        path = Path(path)
        header = FileManager._HEADER.pack(FileManager.BINARY_MAGIC, FileManager.BINARY_VERSION,
                                          f.N, f.h, f.origin[0], f.origin[1])
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(np.ascontiguousarray(f.values, dtype="<f8").tobytes())
            fh.write(np.ascontiguousarray(f.domain_mask, dtype=np.uint8).tobytes())
        print(f"  Campo binário salvo em: {path}")
        return path

    @staticmethod
    def load_field_binary(path: PathLike) -> Field:
        data = Path(path).read_bytes()
        size = FileManager._HEADER.size
        if len(data) < size:
            raise ShapeError("Arquivo binário truncado.")
        magic, version, N, h, ox, oy = FileManager._HEADER.unpack_from(data)
        if magic != FileManager.BINARY_MAGIC:
            raise ShapeError(f"Assinatura inválida: {magic!r}")
        if version != FileManager.BINARY_VERSION:
            raise ShapeError(f"Versão {version} não suportada.")
        if len(data) != size + 9 * N * N:
            raise ShapeError("Tamanho do arquivo binário incompatível com N.")

        values = np.frombuffer(data, dtype="<f8", count=N * N, offset=size).reshape(N, N)
        mask = np.frombuffer(data, dtype=np.uint8, count=N * N, offset=size + 8 * N * N).reshape(N, N)
        return Field(values.astype(float), h, mask.astype(bool), (ox, oy))

    @staticmethod
    def save_field(f: Field, path: PathLike) -> Path:
        suffix = Path(path).suffix.lower()
        if suffix == ".csv":
            return FileManager.save_field_csv(f, path)
        if suffix == ".dclf":
            return FileManager.save_field_binary(f, path)
        raise ArgumentError(f"Extensão de campo desconhecida: '{suffix}' (use .csv ou .dclf)")

    @staticmethod
    def load_field(path: PathLike) -> Field:
        path = Path(path)
        if not path.is_file():
            raise ArgumentError(f"Arquivo de campo não encontrado: {path}")
        suffix = path.suffix.lower()
        if suffix == ".csv":
            return FileManager.load_field_csv(path)
        if suffix == ".dclf":
            return FileManager.load_field_binary(path)
        raise ArgumentError(f"Extensão de campo desconhecida: '{suffix}' (use .csv ou .dclf)")

    # --- Tabelas ---

    @staticmethod
    def save_profile_csv(profile: RadialProfile, path: PathLike) -> Path:
        """Colunas r, u e, para o sistema, v."""
        df = pd.DataFrame({"r": profile.r_nodes, "u": profile.u_vals})
        if profile.v_vals is not None:
            df["v"] = profile.v_vals
        return FileManager.save_table(df, path, TableKind.PROFILE)

    @staticmethod
    def save_table(df: pd.DataFrame, path: PathLike, kind: Optional[TableKind] = None) -> Path:
        if kind is not None:
            df = ConfigFieldsManager.ensure_columns(df.copy(), kind)
        path = Path(path)
        df.to_csv(path, index=False, lineterminator="\n")
        print(f"  Tabela salva em: {path}")
        return path

    # --- Relatórios ---

    @staticmethod
    def _plain(value):
        if isinstance(value, (np.floating, np.integer, np.bool_)):
            return value.item()
        if isinstance(value, np.ndarray):
            return value.tolist()
        return value

    @staticmethod
    def save_report_text(report: Dict, path: PathLike) -> Path:
        """Relatório plano key=value, uma chave por linha."""
        lines = []
        for key, value in report.items():
            value = FileManager._plain(value)
            lines.append(f"{key}={value!r}" if isinstance(value, float) else f"{key}={value}")
        path = Path(path)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"  Relatório salvo em: {path}")
        return path

    @staticmethod
    def load_report_text(path: PathLike) -> Dict[str, str]:
        out = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if line.strip():
                key, _, value = line.partition("=")
                out[key] = value
        return out

    @staticmethod
    def save_report_json(report: Dict, path: PathLike) -> Path:
        path = Path(path)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, default=FileManager._plain)
            fh.write("\n")
        print(f"  Relatório JSON salvo em: {path}")
        return path
