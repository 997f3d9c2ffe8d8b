"""
Protocol modules for Cuspidal Tables
"""

from cuspidal_tables.protocols.base import AnalysisOptions, BaseProtocol
from cuspidal_tables.protocols.reflection import ReflectionProtocol
from cuspidal_tables.protocols.involution import InvolutionProtocol
from cuspidal_tables.protocols.rank_one import RankOneProtocol

__all__ = [
    'AnalysisOptions',
    'BaseProtocol',
    'ReflectionProtocol',
    'InvolutionProtocol',
    'RankOneProtocol'
]
