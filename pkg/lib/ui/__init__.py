"""
lib.ui (facade)
=================================
Streamlit ページ用の補助（キャッシュ・ローダ・説明 expander）。
"""

from .cache import cache_data, cache_resource
from .loaders import file_stamp, load_table_cached, load_dictionary_cached

__all__ = ["cache_data", "cache_resource", "file_stamp", "load_table_cached", "load_dictionary_cached"]
