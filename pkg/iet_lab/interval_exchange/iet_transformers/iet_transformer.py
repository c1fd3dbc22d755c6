from interval_exchange.iet.iet import Iet


class IetTransformer:
    def transform(self, iet: Iet) -> Iet:
        raise Exception("Not implemented!")
