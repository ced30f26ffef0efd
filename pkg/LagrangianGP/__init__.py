__all__ = ["workflow",
           "utils",
           "compute",
           "datastructures",
           "datagen"
           ]
