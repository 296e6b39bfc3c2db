"""k-means baseline"""

from .kmeans import KMeansConfig, KMeansModel, assign, fit, nearest_centroid, write_model_csv

__all__ = ['KMeansConfig', 'KMeansModel', 'assign', 'fit', 'nearest_centroid', 'write_model_csv']
