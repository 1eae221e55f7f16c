# src\deadcore_app\core\utils\fields.py

import pandas as pd
from enum import Enum
from typing import Dict, List

from .errors import ConfigError


class FloatList(list):
    """Marcador de tipo para listas de reais separadas por vírgula."""


class TableKind(Enum):
    """
    Enum para os tipos de tabela emitidos pelos comandos.
    """
    RESIDUALS = 1
    GROWTH = 2
    PROFILE = 3


class ConfigFieldsManager:
    """
    Classe utilitária que declara as seções, chaves, tipos e valores padrão
    dos arquivos de configuração, além das colunas das tabelas de saída.
    """
    # Schema de tipos por seção
    _FIELD_TYPES: Dict[str, Dict[str, type]] = {
        "run": {"name": str, "seed": int},
        "system": {"p": float, "q": float, "lambda1": float, "lambda2": float, "n": int},
        "henon": {"p": float, "mu": float, "alpha": float, "n": int, "critical": bool},
        "operator": {"kind": str, "ell_lo": float, "ell_hi": float},
        "grid": {"size": int, "radius": float},
        "solver": {
            "scheme": str,
            "tol": float,
            "max_iter": int,
            "damping": float,
            "epsilon": float,
            "delta": float,
            "pseudo_dt": str,
            "eps_schedule": FloatList,
            "jacobian_floor": float,
            "line_search_steps": int,
            "log_every": int,
        },
        "boundary": {"u": float, "v": float, "exact": bool},
        "radial": {"problem": str, "radius": float, "nodes": int, "method": str, "tol": float,
                   "max_iter": int, "fb_factor": float, "damping": float, "delta": float},
        "analysis": {"tol": float, "r_max": float, "c_floor": float, "fit_slack": float,
                     "porosity_r_max": float, "combine": str},
        "suite": {"cases": int, "dimensions": FloatList, "rel_tol": float, "r_min": float, "r_max": float},
        "exact": {"include_named": bool, "coordinate_variant": str},
        "liouville": {"field": str, "tol": float, "annuli": int},
        "blowup": {"family": str, "taus": FloatList, "offset": float, "size": int},
        "fit": {"field": str, "v_field": str, "radii": FloatList, "combine": str},
    }

    # Valores padrão (None = calculado a partir de outras chaves)
    _FIELD_DEFAULTS: Dict[str, Dict[str, object]] = {
        "run": {"name": "run", "seed": 0},
        "system": {"p": 0.0, "q": 0.0, "lambda1": 0.5, "lambda2": 0.5, "n": 2},
        "henon": {"p": 1.0, "mu": 0.5, "alpha": 1.0, "n": 2, "critical": False},
        "operator": {"kind": "trace", "ell_lo": 1.0, "ell_hi": 1.0},
        "grid": {"size": 257, "radius": 1.0},
        "solver": {
            "scheme": "newton",
            "tol": 1e-9,
            "max_iter": 60,
            "damping": 1.0,
            "epsilon": 0.0,
            "delta": None,
            "pseudo_dt": "auto",
            "eps_schedule": [1.0, 0.1, 0.01, 0.0],
            "jacobian_floor": 1e-12,
            "line_search_steps": 8,
            "log_every": 5,
        },
        "boundary": {"u": 1e-3, "v": 1e-3, "exact": False},
        "radial": {"problem": "system", "radius": 1.0, "nodes": 2000, "method": "newton", "tol": 1e-10,
                   "max_iter": 100, "fb_factor": 10.0, "damping": None, "delta": None},
        "analysis": {"tol": None, "r_max": 0.3, "c_floor": None, "fit_slack": 0.2,
                     "porosity_r_max": 0.1, "combine": "sum"},
        "suite": {"cases": 20, "dimensions": [1.0, 2.0, 3.0], "rel_tol": 1e-10, "r_min": 0.05, "r_max": 1.0},
        "exact": {"include_named": True, "coordinate_variant": "corrected"},
        "liouville": {"field": "", "tol": 1e-12, "annuli": 2},
        "blowup": {"family": "offset", "taus": [0.2, 0.1, 0.05], "offset": 0.3, "size": 513},
        "fit": {"field": "", "v_field": "", "radii": [], "combine": "sum"},
    }

    # Colunas das tabelas de saída
    _TABLE_COLUMNS = {
        TableKind.RESIDUALS: ["case", "n", "p", "q", "lambda1", "lambda2", "residual_u", "residual_v", "passed"],
        TableKind.GROWTH: ["r", "S", "log_r", "log_S"],
        TableKind.PROFILE: ["r", "u"],
    }

    _TRUE = {"1", "true", "yes", "sim", "on"}
    _FALSE = {"0", "false", "no", "nao", "não", "off"}

    # --- Schema ---

    @classmethod
    def sections(cls) -> List[str]:
        return list(cls._FIELD_TYPES)

    @classmethod
    def get_section_fields(cls, section: str) -> Dict[str, type]:
        """Retorna as chaves conhecidas de uma seção com seus tipos."""
        if section not in cls._FIELD_TYPES:
            raise ConfigError(f"Seção desconhecida: [{section}]")
        return dict(cls._FIELD_TYPES[section])

    @classmethod
    def defaults(cls, section: str) -> Dict[str, object]:
        """Cópia dos valores padrão de uma seção."""
        cls.get_section_fields(section)
        return {k: (list(v) if isinstance(v, list) else v) for k, v in cls._FIELD_DEFAULTS[section].items()}

    # --- Conversão ---

    @classmethod
    def coerce(cls, section: str, key: str, raw: str):
        """Converte o texto `raw` para o tipo declarado de section.key."""
        types = cls.get_section_fields(section)
        if key not in types:
            raise ConfigError(f"Chave desconhecida: [{section}] {key}")
        kind = types[key]
        text = raw.strip()
        try:
            if kind is bool:
                low = text.lower()
                if low in cls._TRUE:
                    return True
                if low in cls._FALSE:
                    return False
                raise ValueError(text)
            if kind is FloatList:
                return [float(t) for t in text.split(",") if t.strip()]
            return kind(text)
        except ValueError:
            raise ConfigError(f"Valor inválido para [{section}] {key}: '{raw}'") from None

    # --- Tabelas ---

    @classmethod
    def get_table_columns(cls, kind: TableKind) -> List[str]:
        return list(cls._TABLE_COLUMNS[kind])

    @classmethod
    def ensure_columns(cls, df: pd.DataFrame, kind: TableKind) -> pd.DataFrame:
        """
        Garante que a tabela possua as colunas esperadas, na ordem do schema,
        criando colunas ausentes com None. Colunas extras vão para o fim.
        """
        expected = cls.get_table_columns(kind)
        for col in expected:
            if col not in df.columns:
                df[col] = None
        extra = [c for c in df.columns if c not in expected]
        return df[expected + extra]
