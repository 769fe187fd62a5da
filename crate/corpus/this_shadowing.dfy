class Item {
  var price: int
  var stock: int

  constructor(price: int, stock: int)
  {
    this.price := price;
    this.stock := stock;
  }

  method Restock(stock: int) returns (total: int)
    modifies this
  {
    total := this.stock + stock;
    this.stock := total;
  }
}
