class Config:
    def __init__(self, name):
        self.name = name

    def describe(self):
        return "config " + self.name
